#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advconf/attack.hpp"
#include "advconf/classifier.hpp"
#include "advconf/varmodel.hpp"

namespace advconf {

// Configuration CSV: header = option names in model order, optionally
// followed by a `label` column holding -1 or 1.
struct ConfigurationTable {
  std::vector<Configuration> configs;
  std::optional<std::vector<Label>> labels;
};

ConfigurationTable read_configurations(const VariabilityModel& model, std::string_view text);
std::string write_configurations(const VariabilityModel& model, const std::vector<Configuration>& configs,
                                 const std::vector<Label>* labels = nullptr);

// `iter,g,coord_0..coord_{d-1}`; multiple traces are concatenated, each
// starting again at iter 0.
std::string write_traces(const std::vector<AttackTrace>& traces);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace advconf
