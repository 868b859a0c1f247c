#pragma once

// JSON ingestion of observables/states and serialization of reports.
// Matrices are {"re": [[...]], "im": [[...]]}, vectors {"re": [...], "im": [...]};
// "im" may be omitted for real data.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "weakoam/algebra.hpp"
#include "weakoam/evolution.hpp"
#include "weakoam/extraction.hpp"
#include "weakoam/grid.hpp"
#include "weakoam/perturbation.hpp"

namespace weakoam::io {

using nlohmann::json;

Matrix matrix_from_json(const json &doc);
Vector vector_from_json(const json &doc);
json to_json(const Matrix &m);
json to_json(const Vector &v);

json to_json(const GridSpec &grid);
json to_json(const MomentReport &report);
json to_json(const Prediction &prediction);
json to_json(const ExtractionResult &result);
json to_json(const ConvergenceReport &report);

json read_json(const std::filesystem::path &path);
void write_json(const std::filesystem::path &path, const json &doc);

/// 17 significant digits, locale-independent.
std::string format_double(double value);

/// Row-major "x,y,re,im" CSV plus `<path>.json` holding the GridSpec.
void write_field(const std::filesystem::path &csv_path, const GridField &field);

/// Ingests a field written by write_field.
GridField read_field(const std::filesystem::path &csv_path);

}  // namespace weakoam::io
