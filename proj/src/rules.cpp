#include "advconf/rules.hpp"

#include <algorithm>
#include <functional>

#include "advconf/errors.hpp"

namespace advconf {

std::size_t DecisionTree::depth() const {
  std::function<std::size_t(int)> rec = [&](int i) -> std::size_t {
    const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
    return n.leaf ? 0 : 1 + std::max(rec(n.left), rec(n.right));
  };
  return rec(0);
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.leaf; }));
}

std::size_t DecisionTree::leaf_of(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].leaf) {
    const TreeNode& n = nodes_[i];
    if (n.slot >= x.size()) throw DimensionMismatch("tree splits on a slot beyond the vector dimension");
    i = static_cast<std::size_t>(x[n.slot] < n.threshold ? n.left : n.right);
  }
  return i;
}

std::vector<PathStep> DecisionTree::path_to(std::size_t leaf) const {
  std::vector<int> parent(nodes_.size(), -1);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].leaf) continue;
    parent[static_cast<std::size_t>(nodes_[i].left)] = static_cast<int>(i);
    parent[static_cast<std::size_t>(nodes_[i].right)] = static_cast<int>(i);
  }
  std::vector<PathStep> path;
  for (std::size_t cur = leaf; parent[cur] >= 0;) {
    const auto p = static_cast<std::size_t>(parent[cur]);
    const TreeNode& n = nodes_[p];
    path.push_back({n.slot, n.threshold, n.right == static_cast<int>(cur)});
    cur = p;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

double gini_sum(double pos, double total) {
  // total * gini = total - (pos^2 + neg^2) / total
  if (total == 0.0) return 0.0;
  const double neg = total - pos;
  return total - (pos * pos + neg * neg) / total;
}

class TreeBuilder {
 public:
  TreeBuilder(const LabeledDataset& data, std::size_t max_depth) : data_(data), max_depth_(max_depth) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> all(data_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    grow(all, 0);
    return std::move(nodes_);
  }

 private:
  int grow(const std::vector<std::size_t>& idx, std::size_t depth) {
    const int me = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::size_t pos = 0;
    for (std::size_t i : idx) pos += data_.labels[i] == Label::Acceptable;
    TreeNode node;
    node.count = idx.size();
    node.label = 2 * pos >= idx.size() ? Label::Acceptable : Label::NonAcceptable;

    const bool pure = pos == 0 || pos == idx.size();
    if (pure || depth >= max_depth_) {
      nodes_[static_cast<std::size_t>(me)] = node;
      return me;
    }

    bool found = false;
    double best_score = 0.0;
    std::size_t best_slot = 0;
    double best_threshold = 0.0;
    const double total = static_cast<double>(idx.size());
    std::vector<std::pair<double, bool>> column(idx.size());
    for (std::size_t slot = 0; slot < data_.dimension(); ++slot) {
      for (std::size_t k = 0; k < idx.size(); ++k)
        column[k] = {data_.points[idx[k]][slot], data_.labels[idx[k]] == Label::Acceptable};
      std::sort(column.begin(), column.end());
      double left_n = 0.0, left_pos = 0.0;
      for (std::size_t k = 0; k + 1 < column.size(); ++k) {
        left_n += 1.0;
        left_pos += column[k].second ? 1.0 : 0.0;
        if (column[k].first == column[k + 1].first) continue;
        const double score = gini_sum(left_pos, left_n) + gini_sum(static_cast<double>(pos) - left_pos, total - left_n);
        if (!found || score < best_score) {
          found = true;
          best_score = score;
          best_slot = slot;
          best_threshold = 0.5 * (column[k].first + column[k + 1].first);
        }
      }
    }
    if (!found) {
      nodes_[static_cast<std::size_t>(me)] = node;
      return me;
    }

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) (data_.points[i][best_slot] < best_threshold ? left : right).push_back(i);
    node.leaf = false;
    node.slot = best_slot;
    node.threshold = best_threshold;
    node.left = grow(left, depth + 1);
    node.right = grow(right, depth + 1);
    nodes_[static_cast<std::size_t>(me)] = node;
    return me;
  }

  const LabeledDataset& data_;
  std::size_t max_depth_;
  std::vector<TreeNode> nodes_;
};

LabeledDataset classifier_labeled_sample(const SvmModel& m, const Encoder& enc, std::size_t n, std::uint64_t seed) {
  LabeledDataset data;
  for (const auto& c : sample_valid(enc.model(), n, seed)) {
    FeatureVector x = enc.encode(c);
    const Label y = m.predict(x);
    data.add(std::move(x), y);
  }
  return data;
}

}  // namespace

DecisionTree fit_tree(const LabeledDataset& data, std::size_t max_depth) {
  if (data.size() == 0) throw ConfigurationError("cannot fit a tree on zero samples");
  for (const auto& x : data.points)
    if (x.size() != data.dimension()) throw DimensionMismatch("tree samples have inconsistent dimensions");
  return DecisionTree(TreeBuilder(data, max_depth).build());
}

DecisionTree distill_tree(const SvmModel& m, const Encoder& enc, std::size_t n_samples, std::size_t max_depth,
                          std::uint64_t seed) {
  if (n_samples == 0) throw ConfigurationError("distillation needs at least one sample");
  if (m.dimension() != enc.dimension()) throw DimensionMismatch("classifier and encoder dimensions differ");
  return fit_tree(classifier_labeled_sample(m, enc, n_samples, seed), max_depth);
}

double tree_agreement(const DecisionTree& t, const SvmModel& m, const Encoder& enc, std::size_t n,
                      std::uint64_t seed) {
  if (n == 0) return 1.0;
  const LabeledDataset data = classifier_labeled_sample(m, enc, n, seed);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < data.size(); ++i) agree += t.classify(data.points[i]) == data.labels[i];
  return static_cast<double>(agree) / static_cast<double>(n);
}

namespace {

ExprPtr step_atom(const PathStep& s, const Encoder& enc) {
  const FeatureSlot& slot = enc.layout().at(s.slot);
  const OptionDef& o = enc.model().options()[slot.option];
  switch (slot.kind) {
    case FeatureSlot::Kind::Numeric: {
      const double t = o.min + s.threshold * (o.max - o.min);
      return Expr::make_atom({o.name, s.greater_equal ? CompareOp::Ge : CompareOp::Lt, t});
    }
    case FeatureSlot::Kind::Boolean:
      return Expr::make_atom({o.name, CompareOp::Eq, s.greater_equal});
    case FeatureSlot::Kind::OneHot: {
      ExprPtr a = Expr::make_atom({o.name, CompareOp::Eq, o.choices[slot.choice]});
      return s.greater_equal ? a : Expr::make_not(a);
    }
  }
  return nullptr;
}

// An atom that is well-typed for the model's first option.
ExprPtr some_atom(const VariabilityModel& model) {
  const OptionDef& o = model.options().front();
  switch (o.kind) {
    case OptionKind::Boolean: return Expr::make_atom({o.name, CompareOp::Eq, true});
    case OptionKind::Categorical: return Expr::make_atom({o.name, CompareOp::Eq, o.choices.front()});
    case OptionKind::Numeric: return Expr::make_atom({o.name, CompareOp::Ge, o.min});
  }
  return nullptr;
}

}  // namespace

std::vector<Constraint> extract_constraints(const DecisionTree& t, const Encoder& enc) {
  std::vector<Constraint> out;
  const auto& nodes = t.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].leaf || nodes[i].label != Label::NonAcceptable) continue;
    ExprPtr conj;
    for (const PathStep& s : t.path_to(i)) {
      ExprPtr a = step_atom(s, enc);
      conj = conj ? Expr::make_binary(Expr::Kind::And, conj, a) : a;
    }
    if (!conj) {
      // A -1 root forbids everything: negate a tautology.
      ExprPtr a = some_atom(enc.model());
      conj = Expr::make_binary(Expr::Kind::Or, a, Expr::make_not(a));
    }
    out.push_back(Constraint{Expr::make_not(conj)});
  }
  return out;
}

VariabilityModel inject_constraints(const VariabilityModel& model, const std::vector<Constraint>& cs) {
  std::vector<Constraint> all = model.constraints();
  all.insert(all.end(), cs.begin(), cs.end());
  return VariabilityModel(model.options(), std::move(all));
}

std::string format_tree(const DecisionTree& t, const Encoder& enc) {
  std::string out;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t indent) {
    const TreeNode& n = t.nodes()[i];
    out.append(2 * indent, ' ');
    if (n.leaf) {
      out += "leaf " + std::to_string(sign(n.label)) + ' ' + std::to_string(n.count) + '\n';
      return;
    }
    out += "slot " + std::to_string(n.slot) + ' ' + enc.slot_name(n.slot) + " < " + format_real(n.threshold) + '\n';
    rec(static_cast<std::size_t>(n.left), indent + 1);
    rec(static_cast<std::size_t>(n.right), indent + 1);
  };
  rec(0, 0);
  return out;
}

}  // namespace advconf
