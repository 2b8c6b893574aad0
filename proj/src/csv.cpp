#include "advconf/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "advconf/errors.hpp"

namespace advconf {
namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
      field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
    start = nl + 1;
  }
  return out;
}

double parse_real(std::string_view s, std::size_t row) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("row " + std::to_string(row) + ": '" + std::string(s) + "' is not a number");
  return v;
}

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConfigurationTable read_configurations(const VariabilityModel& model, std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("configuration CSV has no header");
  const auto header = split_line(lines[0]);
  const auto& opts = model.options();
  const bool labelled = header.size() == opts.size() + 1 && header.back() == "label";
  if (header.size() != opts.size() + (labelled ? 1 : 0))
    throw ParseError("configuration CSV header must list the model's " + std::to_string(opts.size()) + " options");
  for (std::size_t i = 0; i < opts.size(); ++i)
    if (header[i] != opts[i].name)
      throw ParseError("CSV column " + std::to_string(i) + " is '" + std::string(header[i]) + "', expected '" +
                       opts[i].name + "'");

  ConfigurationTable table;
  if (labelled) table.labels.emplace();
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_line(lines[r]);
    if (fields.size() != header.size())
      throw ParseError("row " + std::to_string(r) + " has " + std::to_string(fields.size()) + " fields");
    Configuration c;
    for (std::size_t i = 0; i < opts.size(); ++i) {
      const std::string_view f = fields[i];
      switch (opts[i].kind) {
        case OptionKind::Boolean:
          if (f != "true" && f != "false")
            throw ParseError("row " + std::to_string(r) + ": boolean '" + opts[i].name + "' must be true/false");
          c.values.emplace(opts[i].name, f == "true");
          break;
        case OptionKind::Categorical:
          c.values.emplace(opts[i].name, std::string(f));
          break;
        case OptionKind::Numeric:
          c.values.emplace(opts[i].name, parse_real(f, r));
          break;
      }
    }
    if (labelled) {
      const std::string_view f = fields.back();
      if (f != "1" && f != "-1" && f != "+1")
        throw ParseError("row " + std::to_string(r) + ": label must be -1 or 1");
      table.labels->push_back(f == "-1" ? Label::NonAcceptable : Label::Acceptable);
    }
    table.configs.push_back(std::move(c));
  }
  return table;
}

std::string write_configurations(const VariabilityModel& model, const std::vector<Configuration>& configs,
                                 const std::vector<Label>* labels) {
  std::string out;
  const auto& opts = model.options();
  for (std::size_t i = 0; i < opts.size(); ++i) {
    if (i) out += ',';
    out += opts[i].name;
  }
  if (labels) out += ",label";
  out += '\n';
  for (std::size_t r = 0; r < configs.size(); ++r) {
    for (std::size_t i = 0; i < opts.size(); ++i) {
      if (i) out += ',';
      const OptionValue& v = configs[r].at(opts[i].name);
      out += std::holds_alternative<double>(v) ? real17(std::get<double>(v)) : describe(v);
    }
    if (labels) out += ',' + std::to_string(sign(labels->at(r)));
    out += '\n';
  }
  return out;
}

std::string write_traces(const std::vector<AttackTrace>& traces) {
  std::string out = "iter,g";
  const std::size_t d = traces.empty() ? 0 : traces.front().points.front().size();
  for (std::size_t k = 0; k < d; ++k) out += ",coord_" + std::to_string(k);
  out += '\n';
  for (const auto& t : traces) {
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      out += std::to_string(i) + ',' + real17(t.decisions[i]);
      for (double v : t.points[i]) out += ',' + real17(v);
      out += '\n';
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace advconf
