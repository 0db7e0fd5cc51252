#pragma once

// First-order forward-mode jets (value, d/dx) used to differentiate pointwise
// expressions of v0 and its derivatives exactly.

namespace gkdv::detail {

struct Jet {
  double v = 0.0;
  double d = 0.0;
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d + b.d}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d - b.d}; }
inline Jet operator*(Jet a, Jet b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Jet operator/(Jet a, Jet b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
inline Jet operator*(double s, Jet a) { return {s * a.v, s * a.d}; }
inline Jet operator+(double s, Jet a) { return {s + a.v, a.d}; }

}  // namespace gkdv::detail
