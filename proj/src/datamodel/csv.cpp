#include "ligen/datamodel/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "ligen/common/errors.hpp"

namespace ligen {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError("not a number: '" + std::string(field) + "'", line_no);
  if (!std::isfinite(v)) throw ParseError("non-finite value", line_no);
  return v;
}

struct PendingRow {
  LabeledSample sample;
  std::size_t line;
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string csv_header(Modality m) {
  std::string h = "x,y";
  if (m == Modality::spectral)
    for (auto name : kSpectralChannelNames) (h += ',') += name;
  else
    for (auto name : kRssiChannelNames) (h += ',') += name;
  return h + ",origin";
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out = csv_header(data.modality());
  out += '\n';
  for (const auto& s : data.samples()) {
    out += format_double(s.location.x);
    out += ',';
    out += format_double(s.location.y);
    for (double v : s.features) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += to_string(s.origin);
    out += '\n';
  }
  return out;
}

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << dataset_to_csv(data);
  if (!out) throw Error("write failed: " + path.string());
}

Dataset dataset_from_csv(const std::string& text, std::optional<Extent> extent) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw ParseError("missing header", 1);
  Modality modality;
  if (line == csv_header(Modality::spectral))
    modality = Modality::spectral;
  else if (line == csv_header(Modality::rssi))
    modality = Modality::rssi;
  else
    throw ParseError("unrecognized header '" + line + "'", line_no);

  const std::size_t d = feature_dim(modality);
  const std::size_t columns = d + 3;
  std::vector<PendingRow> rows;
  while (next_line()) {
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != columns)
      throw ParseError("expected " + std::to_string(columns) + " columns, got " +
                           std::to_string(fields.size()),
                       line_no);
    PendingRow row{{}, line_no};
    row.sample.location = {parse_double(fields[0], line_no), parse_double(fields[1], line_no)};
    row.sample.features.reserve(d);
    for (std::size_t j = 0; j < d; ++j) row.sample.features.push_back(parse_double(fields[2 + j], line_no));
    try {
      row.sample.origin = parse_origin(fields.back());
    } catch (const ContractViolation& e) {
      throw ParseError(e.what(), line_no);
    }
    rows.push_back(std::move(row));
  }

  Extent ext;
  if (extent) {
    ext = *extent;
  } else {
    for (const auto& r : rows) {
      ext.width = std::max(ext.width, r.sample.location.x);
      ext.height = std::max(ext.height, r.sample.location.y);
    }
    if (ext.width <= 0.0) ext.width = 1.0;
    if (ext.height <= 0.0) ext.height = 1.0;
  }

  Dataset data(modality, ext);
  for (auto& r : rows) {
    try {
      data.add(std::move(r.sample));
    } catch (const ContractViolation& e) {
      throw ParseError(e.what(), r.line);
    }
  }
  return data;
}

Dataset read_dataset(const std::filesystem::path& path, std::optional<Extent> extent) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_csv(buf.str(), extent);
}

}  // namespace ligen
