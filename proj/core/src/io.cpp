#include "harperlab/io.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

namespace harperlab::io {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string digits_to_json(const contfrac::ContinuedFraction& cf) {
  json j = json::array();
  for (const BigInt& a : cf.digits()) j.push_back(to_decimal_string(a));
  return j.dump();
}

contfrac::ContinuedFraction digits_from_json(std::string_view text, const std::string& description) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("digit stream is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw InvalidArgument("digit stream must be a JSON array");
  std::vector<BigInt> digits;
  for (const auto& d : j) {
    BigInt a;
    if (d.is_string()) {
      if (a.set_str(d.get<std::string>(), 10) != 0) throw InvalidArgument("bad digit " + d.get<std::string>());
    } else if (d.is_number_unsigned()) {
      a = static_cast<unsigned long>(d.get<std::uint64_t>());
    } else {
      throw InvalidArgument("digits must be decimal strings or positive integers");
    }
    if (sgn(a) <= 0) throw InvalidArgument("digits must be positive");
    digits.push_back(std::move(a));
  }
  return contfrac::ContinuedFraction(std::move(digits),
                                     contfrac::Origin{contfrac::Origin::Kind::explicit_digits, description, 0});
}

std::string convergents_to_json(const contfrac::ContinuedFraction& cf) {
  json j = json::array();
  for (std::size_t n = 0; n <= cf.depth(); ++n)
    j.push_back(json::array({to_decimal_string(cf.p(n)), to_decimal_string(cf.q(n))}));
  return j.dump();
}

std::string truncation_to_json(const model::Truncation& t) {
  json re = json::array(), im = json::array();
  for (const auto& z : t.offdiag) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  json j;
  j["diag"] = t.diag;
  j["offdiag_re"] = std::move(re);
  j["offdiag_im"] = std::move(im);
  return j.dump();
}

std::string fourier_to_json(const cocycle::FourierSeries& f) {
  json j = json::array();
  for (const auto& z : f.coefficients()) j.push_back(json::array({z.real(), z.imag()}));
  return j.dump();
}

cocycle::FourierSeries fourier_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("Fourier vector is not valid JSON: ") + e.what());
  }
  if (!j.is_array() || j.size() % 2 == 0) throw InvalidArgument("Fourier vector needs 2K+1 [re,im] pairs");
  std::vector<std::complex<double>> c;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw InvalidArgument("Fourier entries must be [re,im] pairs");
    c.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  const long K = static_cast<long>(j.size() / 2);
  return cocycle::FourierSeries(K, std::move(c));
}

std::string lyapunov_csv_header() { return "lambda1,lambda2,lambda3,alpha,E,n,grid,value,stderr,excluded\n"; }

std::string lyapunov_csv_row(const model::CouplingTriple& c, double alpha, double E,
                             const cocycle::LyapunovEstimate& est) {
  std::ostringstream os;
  os << format_double(c.lambda1) << ',' << format_double(c.lambda2) << ',' << format_double(c.lambda3) << ','
     << format_double(alpha) << ',' << format_double(E) << ',' << est.n_steps << ',' << est.theta_grid << ','
     << format_double(est.value) << ',' << format_double(est.std_error) << ',' << est.excluded << '\n';
  return os.str();
}

std::string spectrum_csv(const spectral::SpectrumApproximation& s) {
  std::string out = "index,eigenvalue\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    out += std::to_string(i) + ',' + format_double(s.eigenvalues[i]) + '\n';
  return out;
}

}  // namespace harperlab::io
