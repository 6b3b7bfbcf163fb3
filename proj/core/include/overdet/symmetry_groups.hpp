#pragma once

#include <string>
#include <variant>
#include <vector>

namespace overdet::symmetry {

/// Dihedral group D_k acting on the circle (N = 2).
struct Dihedral {
  int k;
};
/// Full isometry group of the icosahedron, I_h (N = 3).
struct IcosahedralFull {};
/// Rotation group of the 600-cell, 7200 elements (N = 4).
struct HyperIcosahedralRotations {};
/// A user-described group: only its first invariant nonradial degree and the
/// dimension of the invariant harmonics at that degree are known.
struct Custom {
  int dim;
  int i1;
  int multiplicity;
};

class SymmetryGroup {
 public:
  using Kind = std::variant<Dihedral, IcosahedralFull, HyperIcosahedralRotations, Custom>;

  SymmetryGroup(Kind kind);  // NOLINT(google-explicit-constructor): validated on entry

  /// Accepts "dihedral:K", "icosahedral", "hyper-icosahedral", "custom:N:I1:MULT".
  static SymmetryGroup parse(const std::string& spec);

  const Kind& kind() const noexcept { return kind_; }
  int dimension() const noexcept;
  std::string name() const;

 private:
  Kind kind_;
};

struct InvariantDegree {
  int degree;
  int multiplicity;  // dimension of G-invariant spherical harmonics of this degree
};

/// Laplace-Beltrami eigenvalue i(i+N-2) on S^{N-1}.
constexpr double gamma(int degree, int dim) {
  return static_cast<double>(degree) * static_cast<double>(degree + dim - 2);
}

InvariantDegree first_invariant_degree(const SymmetryGroup& group);

/// The first `count` nonradial degrees carrying G-invariant harmonics, ascending.
/// Custom groups report i1 followed by every higher degree (multiplicity unknown, taken as 1).
std::vector<InvariantDegree> invariant_degrees(const SymmetryGroup& group, int count);

/// Dimension of the harmonics of degree i on S^3 invariant under the 600-cell
/// rotation group. Zero for odd i; the character sum is checked for integrality.
int hyper_icosahedron_multiplicity(int degree);

/// Dimension of I_h-invariant harmonics of degree l on S^2, read off the
/// harmonic Molien series 1/((1-t^6)(1-t^10)).
int icosahedral_multiplicity(int degree);

struct ConditionGReport {
  SymmetryGroup group;
  int i1;
  double gamma1;
  int multiplicity;
  double r2;  // second zero of the radial profile: lambda_bar_2 = r2^2
  double s1;  // first zero of the derivative of the degree-i1 profile: sigma = s1^2
  bool passes;
};

ConditionGReport check_condition_G(const SymmetryGroup& group);

/// Throws ConditionGFailure unless the report passes.
void require_condition_G(const SymmetryGroup& group);

}  // namespace overdet::symmetry
