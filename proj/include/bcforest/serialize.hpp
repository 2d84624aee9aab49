#pragma once

#include <iosfwd>
#include <string>

#include "bcforest/correction.hpp"
#include "bcforest/ensemble.hpp"

namespace bcf {

// Line-oriented text format. The first line is a version tag
// ("bcforest-ensemble 1" / "bcforest-corrected 1"); reals are written as
// hexadecimal floats so a save/load cycle reproduces predictions exactly.
// The format may change between versions.
void save_ensemble(std::ostream& out, const Ensemble& ensemble);
Ensemble load_ensemble(std::istream& in);

void save_model(std::ostream& out, const CorrectedModel& model);
CorrectedModel load_model(std::istream& in);

void save_model(const std::string& path, const CorrectedModel& model);
CorrectedModel load_model(const std::string& path);

}  // namespace bcf
