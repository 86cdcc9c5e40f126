#include "ptqm/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ptqm::io {

namespace {

Json entries_to_json(std::span<const Complex> entries) {
  Json out = Json::array();
  for (const Complex& z : entries) out.push_back(Json::array({z.real(), z.imag()}));
  return out;
}

ComplexVector entries_from_json(const Json& j, size_t expected, const std::string& context) {
  if (!j.is_array()) throw Error(context + ": \"entries\" must be an array");
  if (j.size() != expected) {
    throw Error(context + ": \"entries\" has length " + std::to_string(j.size()) +
                ", expected " + std::to_string(expected));
  }
  ComplexVector out(expected);
  for (size_t k = 0; k < expected; ++k) {
    const Json& pair = j[k];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw Error(context + ": entries[" + std::to_string(k) + "] must be a [re, im] pair");
    }
    const double re = pair[0].get<double>();
    const double im = pair[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw Error(context + ": entries[" + std::to_string(k) + "] is non-finite");
    }
    out[k] = Complex(re, im);
  }
  return out;
}

int dim_from_json(const Json& j, const std::string& context) {
  if (!j.contains("dim") || !j["dim"].is_number_integer()) {
    throw Error(context + ": missing integer field \"dim\"");
  }
  const int dim = j["dim"].get<int>();
  if (dim < 1) throw Error(context + ": \"dim\" must be positive");
  if (!j.contains("entries")) throw Error(context + ": missing field \"entries\"");
  return dim;
}

Json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(path.string() + ": cannot open for reading");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json out;
  out["dim"] = m.dim();
  out["entries"] = entries_to_json(m.entries());
  return out;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& context) {
  const int dim = dim_from_json(j, context);
  ComplexVector entries =
      entries_from_json(j["entries"], static_cast<size_t>(dim) * static_cast<size_t>(dim), context);
  return ComplexMatrix(dim, std::move(entries));
}

ComplexMatrix load_matrix(const std::filesystem::path& path) {
  return matrix_from_json(parse_file(path), path.string());
}

void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m) {
  write_file(path, matrix_to_json(m).dump(2) + "\n");
}

Json vector_to_json(std::span<const Complex> v) {
  Json out;
  out["dim"] = v.size();
  out["entries"] = entries_to_json(v);
  return out;
}

ComplexVector vector_from_json(const Json& j, const std::string& context) {
  const int dim = dim_from_json(j, context);
  return entries_from_json(j["entries"], static_cast<size_t>(dim), context);
}

ComplexVector load_vector(const std::filesystem::path& path) {
  return vector_from_json(parse_file(path), path.string());
}

void save_vector(const std::filesystem::path& path, std::span<const Complex> v) {
  write_file(path, vector_to_json(v).dump(2) + "\n");
}

Json antilinear_to_json(const AntilinearOperator& a) {
  Json out = matrix_to_json(a.m);
  out["conjugates"] = true;
  return out;
}

AntilinearOperator load_antilinear(const std::filesystem::path& path) {
  const Json j = parse_file(path);
  const std::string context = path.string();
  if (!j.contains("conjugates") || !j["conjugates"].is_boolean() || !j["conjugates"].get<bool>()) {
    throw Error(context + ": anti-linear operator file requires \"conjugates\": true");
  }
  return AntilinearOperator{matrix_from_json(j, context)};
}

void save_antilinear(const std::filesystem::path& path, const AntilinearOperator& a) {
  write_file(path, antilinear_to_json(a).dump(2) + "\n");
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (size_t k = 0; k < header.size(); ++k) {
    if (k) out += ',';
    out += header[k];
  }
  out += '\n';
  char buf[64];
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw Error("write_csv: row width differs from header");
    for (size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[k]);
      out += buf;
    }
    out += '\n';
  }
  write_file(path, out);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(path.string() + ": cannot open for reading");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": empty CSV");
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream rs(line);
    std::vector<double> row;
    while (std::getline(rs, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(path.string() + ": line " + std::to_string(lineno) +
                    ": not a number: \"" + cell + "\"");
      }
    }
    if (row.size() != table.header.size()) {
      throw Error(path.string() + ": line " + std::to_string(lineno) + ": expected " +
                  std::to_string(table.header.size()) + " columns, got " +
                  std::to_string(row.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << contents;
  if (!out) throw Error(path.string() + ": write failed");
}

std::string digest_file(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return std::string(buf);
}

}  // namespace ptqm::io
