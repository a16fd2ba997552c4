#pragma once

// JSON forms of the core types. Complex numbers are [re, im]; matrices are
// row-major nested arrays.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "uncert/bounds.hpp"
#include "uncert/mus.hpp"
#include "uncert/optimize.hpp"

namespace uncert::cli {

using nlohmann::json;

json to_json(Complex c);
Complex complex_from_json(const json& j);

json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

json ket_to_json(const Ket& k);
Ket ket_from_json(const json& j);

/// {"dims", "labels", "matrix"}; parsing also accepts "ket" in place of "matrix".
json to_json(const QState& s);
QState state_from_json(const json& j);

/// {"name", "kets"} with kets[j] the j-th basis vector.
json to_json(const BasisSet& b);
BasisSet basis_from_json(const json& j);

/// {"elements": [matrix, ...]}; a basis document is accepted too.
json to_json(const Povm& p);
Povm povm_from_json(const json& j);

/// A bare matrix or {"matrix": ...}.
CMatrix projector_from_json(const json& j);

json to_json(const UncertaintyReport& r);
json to_json(const OverlapBound& b);
json to_json(const DpTrace& t);
json to_json(const RecoveryResidual& r);
json to_json(const ClassLabel& c);
json to_json(const FgSystem& f);

json to_json(const MusFamilySpec& s);
MusFamilySpec spec_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace uncert::cli
