#pragma once

#include <complex>
#include <string>
#include <vector>

#include "json.hpp"
#include "stablekit/boundary.hpp"
#include "stablekit/homog.hpp"
#include "stablekit/integrability.hpp"
#include "stablekit/numerator.hpp"
#include "stablekit/puiseux.hpp"
#include "stablekit/realization.hpp"
#include "stablekit/regularity.hpp"
#include "stablekit/stability.hpp"

namespace stablekit::report {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// Non-finite doubles become the strings "inf", "-inf" and "nan".
json number(double x);
json complex(std::complex<double> z);
json exact(const GaussRat& g);
json poly(const Poly& p);
json point(const std::vector<GaussRat>& z);
json point(const std::vector<std::complex<double>>& z);

json to_json(const stability::Result& r);
json to_json(const stability::DichotomySplit& d);
json to_json(const homog::HomogeneousDecomposition& d);
json to_json(const homog::SlopeProfile& s);
json to_json(const homog::InterlacingResult& r);
json to_json(const puiseux::Branch& b);
json to_json(const puiseux::LocalFactorization& f);
json to_json(const regularity::Report& r);
json to_json(const regularity::UcoCrosscheck& u);
json to_json(const numerator::IdealPresentation& I);
json to_json(const numerator::BoundednessReport& r);
json to_json(const integrability::Profile& p);
json to_json(const integrability::Estimate& e);
json to_json(const integrability::QuadratureParams& q);
json to_json(const boundary::LevelRegion& r);
json to_json(const boundary::SequenceVerdict& v);
json to_json(const realization::ValidationReport& r);
json to_json(const realization::LocalSplit& s);

// Rows "t,x1,branch_index,x2" with a header line.
std::string traces_csv(const std::vector<boundary::Trace>& traces);

// {"slope": a | "inf" | 0, "B": b, "radius": r}; slope 0 and "inf" select the trivial horns.
boundary::Horn horn_from_json(const json& j);
json horn_to_json(const boundary::Horn& h);

// {"n", "c": {re, im}, "alpha": [...], "beta": [...], "S": [[...]], "P": [[...]]}.
realization::PipRealization realization_from_json(const json& j);
json realization_to_json(const realization::PipRealization& R);

// Sorted keys, two-space indent, trailing newline.
std::string dump(const json& j);

}  // namespace stablekit::report
