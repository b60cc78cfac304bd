#pragma once

#include "rankr/deflation.hpp"
#include "rankr/newton.hpp"

#include <json.hpp>

#include <string>

namespace rankr {

nlohmann::json to_json(const Vector& x);  // [[re, im], ...]
nlohmann::json to_json(const IterationTrace& trace);
nlohmann::json to_json(const DeflationResult& result);

// One row per iterate: "Step %2d:  residual = %.1e  shift = %.1e", where the
// shift printed on row k is the step that produced x_k (none on row 0).
std::string format_table(const IterationTrace& trace);

// Header k,residual,shift; shift is the step leaving x_k, empty on the last row.
std::string format_csv(const IterationTrace& trace);

std::string format_vector(const Vector& x);

}  // namespace rankr
