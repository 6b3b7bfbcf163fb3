#include "overdet/symmetry_groups.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "overdet/errors.hpp"
#include "overdet/special_functions.hpp"

namespace overdet::symmetry {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

int parse_int(const std::string& s, const std::string& context) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw DomainError("bad integer '" + s + "' in " + context);
  return value;
}

}  // namespace

SymmetryGroup::SymmetryGroup(Kind kind) : kind_(kind) {
  std::visit(Overloaded{
                 [](const Dihedral& d) {
                   if (d.k < 1) throw DomainError("dihedral group needs k >= 1");
                 },
                 [](const IcosahedralFull&) {},
                 [](const HyperIcosahedralRotations&) {},
                 [](const Custom& c) {
                   if (c.dim < 2) throw DomainError("custom group needs N >= 2");
                   if (c.i1 < 1) throw DomainError("custom group needs i1 >= 1");
                   if (c.multiplicity < 1) throw DomainError("custom group needs multiplicity >= 1");
                 },
             },
             kind_);
}

SymmetryGroup SymmetryGroup::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw DomainError("empty group specification");
  const std::string& head = parts[0];
  if (head == "dihedral" && parts.size() == 2) {
    return SymmetryGroup(Dihedral{parse_int(parts[1], spec)});
  }
  if ((head == "icosahedral" || head == "icosahedral-full") && parts.size() == 1) {
    return SymmetryGroup(IcosahedralFull{});
  }
  if ((head == "hyper-icosahedral" || head == "600-cell") && parts.size() == 1) {
    return SymmetryGroup(HyperIcosahedralRotations{});
  }
  if (head == "custom" && parts.size() == 4) {
    return SymmetryGroup(
        Custom{parse_int(parts[1], spec), parse_int(parts[2], spec), parse_int(parts[3], spec)});
  }
  throw DomainError("unknown group specification '" + spec +
                    "' (expected dihedral:K, icosahedral, hyper-icosahedral or custom:N:I1:MULT)");
}

int SymmetryGroup::dimension() const noexcept {
  return std::visit(Overloaded{
                        [](const Dihedral&) { return 2; },
                        [](const IcosahedralFull&) { return 3; },
                        [](const HyperIcosahedralRotations&) { return 4; },
                        [](const Custom& c) { return c.dim; },
                    },
                    kind_);
}

std::string SymmetryGroup::name() const {
  return std::visit(Overloaded{
                        [](const Dihedral& d) { return "dihedral:" + std::to_string(d.k); },
                        [](const IcosahedralFull&) { return std::string("icosahedral"); },
                        [](const HyperIcosahedralRotations&) {
                          return std::string("hyper-icosahedral");
                        },
                        [](const Custom& c) {
                          return "custom:" + std::to_string(c.dim) + ":" + std::to_string(c.i1) +
                                 ":" + std::to_string(c.multiplicity);
                        },
                    },
                    kind_);
}

int hyper_icosahedron_multiplicity(int degree) {
  if (degree < 0) throw DomainError("hyper_icosahedron_multiplicity: degree must be >= 0");
  if (degree % 2 != 0) return 0;
  const double n = degree + 1.0;
  auto ratio = [n](double phi) { return std::sin(0.5 * n * phi) / std::sin(0.5 * phi); };
  constexpr double pi = std::numbers::pi;
  const double sum = 20.0 * ratio(2.0 * pi / 3.0) + 12.0 * ratio(2.0 * pi / 5.0) +
                     12.0 * ratio(4.0 * pi / 5.0) + 15.0 * ratio(pi) + n;
  const double m = sum / 60.0;
  const double rounded = std::round(m);
  if (std::fabs(m - rounded) > 1e-9) {
    throw IntegralityError("600-cell multiplicity is not an integer", degree, m);
  }
  return static_cast<int>(rounded);
}

int icosahedral_multiplicity(int degree) {
  if (degree < 0) throw DomainError("icosahedral_multiplicity: degree must be >= 0");
  int count = 0;
  for (int b = 0; 10 * b <= degree; ++b) {
    if ((degree - 10 * b) % 6 == 0) ++count;
  }
  return count;
}

InvariantDegree first_invariant_degree(const SymmetryGroup& group) {
  return invariant_degrees(group, 1).front();
}

std::vector<InvariantDegree> invariant_degrees(const SymmetryGroup& group, int count) {
  std::vector<InvariantDegree> out;
  if (count < 1) return out;
  const auto multiplicity_at = [&group](int i) -> int {
    return std::visit(Overloaded{
                          [i](const Dihedral& d) { return i % d.k == 0 ? 1 : 0; },
                          [i](const IcosahedralFull&) { return icosahedral_multiplicity(i); },
                          [i](const HyperIcosahedralRotations&) {
                            return hyper_icosahedron_multiplicity(i);
                          },
                          [i](const Custom& c) {
                            if (i < c.i1) return 0;
                            return i == c.i1 ? c.multiplicity : 1;
                          },
                      },
                      group.kind());
  };
  for (int i = 1; static_cast<int>(out.size()) < count; ++i) {
    if (i > 100000) throw PropertyViolation("invariant_degrees: search exhausted");
    const int m = multiplicity_at(i);
    if (m > 0) out.push_back({i, m});
  }
  return out;
}

ConditionGReport check_condition_G(const SymmetryGroup& group) {
  const auto first = first_invariant_degree(group);
  const int dim = group.dimension();
  const double r2 = special::radial_profile_zero(dim, 2);
  const double s1 = special::first_derivative_zero(dim, first.degree);
  const bool passes = s1 > r2 && first.multiplicity % 2 == 1;
  return {group, first.degree, gamma(first.degree, dim), first.multiplicity, r2, s1, passes};
}

void require_condition_G(const SymmetryGroup& group) {
  const auto report = check_condition_G(group);
  if (!report.passes) {
    std::ostringstream msg;
    msg << "group " << group.name() << " violates condition (G): s1 = " << report.s1
        << ", r2 = " << report.r2 << ", multiplicity = " << report.multiplicity;
    throw ConditionGFailure(msg.str());
  }
}

}  // namespace overdet::symmetry
