#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sepind/decompose.hpp"
#include "sepind/hermitian_core.hpp"
#include "sepind/indicator.hpp"

namespace sepind {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "sepind";
inline constexpr const char* kToolVersion = "1.0.0";

/// Malformed document; field names the offending JSON path.
struct InputError : std::runtime_error {
    InputError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field(std::move(field)) {}
    std::string field;
};

struct MatrixFile {
    /// Absent in raw matrices; callers then need an explicit profile.
    std::optional<std::vector<std::size_t>> dims;
    ComplexMatrix matrix;
    Json metadata = Json::object();
};

/// Validates shape only. Hermiticity is checked when the caller builds a
/// HermitianOperator from the matrix.
MatrixFile parse_matrix_file(const Json& doc);
Json to_json(const MatrixFile& f);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& doc, const std::string& field);

/// FNV-1a 64 over the IEEE-754 bit patterns of (re, im) in row-major order,
/// little-endian byte order, rendered as 16 hex digits.
std::string input_digest(const ComplexMatrix& m);

struct ReportFile {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string input_digest;
    std::vector<std::size_t> profile;
    Method method = Method::Elementary;
    AnalysisReport report;
};

Json to_json(const ReportFile& r);
ReportFile report_from_json(const Json& doc);

/// Terms as lists of factors, each factor {"re": [[...]], "im": [[...]]}.
Json factorization_to_json(const TensorFactorization& f);
TensorFactorization factorization_from_json(const Json& doc, const DimProfile& profile);

Json unit_products_to_json(const std::vector<UnitProduct>& terms);

/// Reads and parses a JSON file; I/O and syntax failures become InputError.
Json read_json_file(const std::string& path);
/// Two-space indentation, trailing newline.
std::string dump_json(const Json& doc);

}  // namespace sepind
