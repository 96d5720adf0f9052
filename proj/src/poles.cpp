#include "ratkrylov/poles.hpp"

#include <cmath>
#include <sstream>

namespace rk {

ProjectivePole::ProjectivePole(Complex mu, Complex nu) : mu_(mu), nu_(nu) {
  require(std::norm(mu_) + std::norm(nu_) > 0.0, "pole pair (0, 0) is not a projective point");
}

bool ProjectivePole::is_infinite(double tol) const {
  return std::abs(nu_) <= tol * std::sqrt(std::norm(mu_) + std::norm(nu_));
}

double ProjectivePole::distance(const ProjectivePole& other) const {
  const double n1 = std::sqrt(std::norm(mu_) + std::norm(nu_));
  const double n2 = std::sqrt(std::norm(other.mu_) + std::norm(other.nu_));
  return std::abs(mu_ * other.nu_ - other.mu_ * nu_) / (n1 * n2);
}

std::string ProjectivePole::str() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  const Complex v = value();
  os.precision(17);
  os << v.real();
  if (v.imag() != 0.0) os << (v.imag() > 0 ? "+" : "-") << std::abs(v.imag()) << "i";
  return os.str();
}

ContinuationPair ContinuationPair::default_for(const ProjectivePole& pole) {
  // Apply A for infinite poles, a pure shift-invert for finite ones.
  if (pole.is_infinite()) return ContinuationPair{Complex(1.0, 0.0), Complex(0.0, 0.0)};
  return ContinuationPair{Complex(0.0, 0.0), Complex(-1.0, 0.0)};
}

bool ContinuationPair::admissible_for(const ProjectivePole& pole, double tol) const {
  require(std::norm(rho) + std::norm(eta) > 0.0, "continuation pair (0, 0) is invalid");
  // (rho, eta) must differ from (nu, mu) as projective points.
  const double n1 = std::sqrt(std::norm(rho) + std::norm(eta));
  const double n2 = std::sqrt(std::norm(pole.nu()) + std::norm(pole.mu()));
  return std::abs(rho * pole.mu() - eta * pole.nu()) / (n1 * n2) > tol;
}

namespace {

// Parse one literal: inf | a | a+bi | a-bi | bi | i | -i
ProjectivePole parse_pole(const std::string& tok) {
  std::string s;
  for (char ch : tok)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  require(!s.empty(), "empty pole literal");
  std::string lower = s;
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "inf" || lower == "+inf") return ProjectivePole::infinity();

  // number := [sign] digits [. digits] [e [sign] digits]
  auto read_number = [&](size_t& pos, bool& ok) -> double {
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    size_t digits_from = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) ++pos;
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
      size_t epos = pos + 1;
      if (epos < s.size() && (s[epos] == '+' || s[epos] == '-')) ++epos;
      size_t edig = epos;
      while (epos < s.size() && std::isdigit(static_cast<unsigned char>(s[epos]))) ++epos;
      if (epos > edig) pos = epos;
    }
    if (pos == digits_from) {  // bare sign, e.g. the "-" of "-i"
      ok = pos > start;
      return (ok && s[start] == '-') ? -1.0 : 1.0;
    }
    ok = true;
    return std::stod(s.substr(start, pos - start));
  };

  size_t pos = 0;
  bool ok = false;
  double first = (s[0] == 'i' || s[0] == 'I') ? 1.0 : read_number(pos, ok);
  if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'I')) {
    require(pos + 1 == s.size(), "trailing characters after imaginary unit");
    return ProjectivePole::finite(Complex(0.0, first));
  }
  require(ok && pos > 0, "unparsable pole literal");
  if (pos == s.size()) return ProjectivePole::finite(Complex(first, 0.0));
  // remainder must be the imaginary part, ending in i
  size_t pos2 = pos;
  bool ok2 = false;
  double second = read_number(pos2, ok2);
  require(ok2 && pos2 + 1 == s.size() && (s[pos2] == 'i' || s[pos2] == 'I'),
          "unparsable pole literal");
  return ProjectivePole::finite(Complex(first, second));
}

}  // namespace

std::vector<ProjectivePole> parse_pole_list(const std::string& text) {
  std::vector<ProjectivePole> out;
  std::string tok;
  std::istringstream is(text);
  while (std::getline(is, tok, ',')) out.push_back(parse_pole(tok));
  require(!out.empty(), "empty pole list");
  return out;
}

std::vector<ProjectivePole> cycle_poles(const std::vector<ProjectivePole>& poles, Index count) {
  require(!poles.empty(), "cannot cycle an empty pole list");
  require(count >= 0, "negative pole count");
  std::vector<ProjectivePole> out;
  out.reserve(count);
  for (Index k = 0; k < count; ++k) out.push_back(poles[k % poles.size()]);
  return out;
}

}  // namespace rk
