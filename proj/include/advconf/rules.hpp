#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "advconf/classifier.hpp"
#include "advconf/encoding.hpp"
#include "advconf/varmodel.hpp"

namespace advconf {

struct TreeNode {
  bool leaf = true;
  std::size_t slot = 0;    // internal: split feature
  double threshold = 0.0;  // internal: x[slot] < threshold goes left
  int left = -1;
  int right = -1;
  Label label = Label::Acceptable;  // leaf: majority label (ties -> +1)
  std::size_t count = 0;            // training samples reaching the node
};

// One edge on a root-to-leaf path.
struct PathStep {
  std::size_t slot;
  double threshold;
  bool greater_equal;  // took the right (>=) branch
};

class DecisionTree {
 public:
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  // Index of the leaf reached by x.
  std::size_t leaf_of(std::span<const double> x) const;
  Label classify(std::span<const double> x) const { return nodes_[leaf_of(x)].label; }

  std::vector<PathStep> path_to(std::size_t leaf) const;

 private:
  std::vector<TreeNode> nodes_;
};

// CART with Gini impurity; candidate thresholds are midpoints between
// consecutive distinct values. Ties prefer the lower slot, then the lower
// threshold.
DecisionTree fit_tree(const LabeledDataset& data, std::size_t max_depth);

// Fits a tree to the classifier's predictions on n_samples fresh valid
// configurations drawn with `seed`.
DecisionTree distill_tree(const SvmModel& m, const Encoder& enc, std::size_t n_samples, std::size_t max_depth,
                          std::uint64_t seed);

// Fraction of n fresh valid configurations on which tree and classifier agree.
double tree_agreement(const DecisionTree& t, const SvmModel& m, const Encoder& enc, std::size_t n,
                      std::uint64_t seed);

// One constraint per -1 leaf: the negation of its path, stated over options.
std::vector<Constraint> extract_constraints(const DecisionTree& t, const Encoder& enc);

// Appends constraints; throws ModelError when one does not type-check.
VariabilityModel inject_constraints(const VariabilityModel& model, const std::vector<Constraint>& cs);

// Indented text, one node per line: `slot <i> <name> < <threshold>` then
// the left and right subtrees, or `leaf <label> <count>`.
std::string format_tree(const DecisionTree& t, const Encoder& enc);

}  // namespace advconf
