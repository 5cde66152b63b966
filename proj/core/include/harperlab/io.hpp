#pragma once

// Text serialization of the core types: digit streams and convergents as JSON
// decimal strings, truncations and Fourier vectors as JSON, Lyapunov rows and
// spectra as CSV. Floats are written in shortest round-trip form.

#include <string>
#include <string_view>

#include "harperlab/cocycle.hpp"
#include "harperlab/cohomology.hpp"
#include "harperlab/contfrac.hpp"
#include "harperlab/model.hpp"
#include "harperlab/spectral.hpp"

namespace harperlab::io {

std::string format_double(double x);

/// ["1","1","2",...]
std::string digits_to_json(const contfrac::ContinuedFraction& cf);
/// Accepts a JSON array of decimal strings or integers.
contfrac::ContinuedFraction digits_from_json(std::string_view text, const std::string& description);

/// [["p0","q0"],["p1","q1"],...]
std::string convergents_to_json(const contfrac::ContinuedFraction& cf);

/// {"diag":[...],"offdiag_re":[...],"offdiag_im":[...]}
std::string truncation_to_json(const model::Truncation& t);

/// [[re,im],...] indexed -K..K
std::string fourier_to_json(const cocycle::FourierSeries& f);
cocycle::FourierSeries fourier_from_json(std::string_view text);

std::string lyapunov_csv_header();
std::string lyapunov_csv_row(const model::CouplingTriple& c, double alpha, double E,
                             const cocycle::LyapunovEstimate& est);

/// index,eigenvalue
std::string spectrum_csv(const spectral::SpectrumApproximation& s);

}  // namespace harperlab::io
