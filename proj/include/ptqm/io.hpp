#ifndef PTQM_IO_HPP
#define PTQM_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "ptqm/antilinear.hpp"
#include "ptqm/linalg.hpp"

namespace ptqm::io {

using Json = nlohmann::ordered_json;

// Matrix files: {"dim": N, "entries": [[re, im], ...]} row-major, length
// N^2. Vector files use the same shape with length N. Parsers reject length
// mismatches and non-finite values, naming the offending field.

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& context);
ComplexMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m);

Json vector_to_json(std::span<const Complex> v);
ComplexVector vector_from_json(const Json& j, const std::string& context);
ComplexVector load_vector(const std::filesystem::path& path);
void save_vector(const std::filesystem::path& path, std::span<const Complex> v);

// Anti-linear operators: the matrix schema plus {"conjugates": true}.
Json antilinear_to_json(const AntilinearOperator& a);
AntilinearOperator load_antilinear(const std::filesystem::path& path);
void save_antilinear(const std::filesystem::path& path, const AntilinearOperator& a);

// CSV with a header row, '.' decimal separator, '\n' line endings, and
// round-trip exact doubles.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
CsvTable read_csv(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string digest_file(const std::filesystem::path& path);

}  // namespace ptqm::io

#endif  // PTQM_IO_HPP
