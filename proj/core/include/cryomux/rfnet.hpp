#pragma once

// Two-port network algebra on a frequency grid: lumped elements, ABCD
// cascading and ABCD <-> S conversion referenced to a real impedance.

#include <cstddef>
#include <span>
#include <vector>

#include "cryomux/units.hpp"

namespace cryomux::rfnet {

inline constexpr double default_z0 = 50.0;

// Impedances or admittances above this magnitude are clamped so that fully
// on/off switch limits never produce NaN.
inline constexpr double clamp_magnitude = 1e12;

/// Strictly increasing, non-empty list of positive frequencies in Hz.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::vector<double> points_hz);

  static FrequencyGrid linspace(double start_hz, double stop_hz, std::size_t n);
  static FrequencyGrid single(double f_hz) { return FrequencyGrid({f_hz}); }

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  std::vector<double> points_;
};

struct Abcd {
  complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  complex determinant() const { return a * d - b * c; }
  friend Abcd operator*(const Abcd& x, const Abcd& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
};

struct SParams {
  complex s11, s21, s12, s22;
};

/// One ABCD matrix per grid point. B in ohm, C in siemens.
class AbcdMatrix {
 public:
  AbcdMatrix(FrequencyGrid grid, std::vector<Abcd> entries, bool clamped = false);

  static AbcdMatrix identity(const FrequencyGrid& grid);

  const FrequencyGrid& grid() const { return grid_; }
  std::span<const Abcd> entries() const { return entries_; }
  const Abcd& operator[](std::size_t i) const { return entries_[i]; }
  std::size_t size() const { return entries_.size(); }
  // True when an element along the way hit the clamp limit.
  bool clamped() const { return clamped_; }

 private:
  FrequencyGrid grid_;
  std::vector<Abcd> entries_;
  bool clamped_ = false;
};

class SMatrix {
 public:
  SMatrix(FrequencyGrid grid, std::vector<SParams> entries, double z0 = default_z0,
          bool clamped = false);

  const FrequencyGrid& grid() const { return grid_; }
  std::span<const SParams> entries() const { return entries_; }
  const SParams& operator[](std::size_t i) const { return entries_[i]; }
  std::size_t size() const { return entries_.size(); }
  double z0() const { return z0_; }
  bool clamped() const { return clamped_; }

  std::vector<complex> s21() const;

 private:
  FrequencyGrid grid_;
  std::vector<SParams> entries_;
  double z0_;
  bool clamped_ = false;
};

enum class ElementKind { resistor, inductor, capacitor };
enum class Orientation { series, shunt };

AbcdMatrix series_element(std::span<const complex> impedance, const FrequencyGrid& grid);
AbcdMatrix shunt_element(std::span<const complex> admittance, const FrequencyGrid& grid);

/// R in ohm, L in henry, C in farad. An infinite value is accepted and taken
/// as the open/short limit through the clamp.
AbcdMatrix lumped(ElementKind kind, double value, Orientation orientation,
                  const FrequencyGrid& grid);

/// Impedance of a single lumped element at angular frequency omega.
complex element_impedance(ElementKind kind, double value, double omega);

AbcdMatrix cascade(std::span<const AbcdMatrix> stages);
AbcdMatrix cascade(std::initializer_list<AbcdMatrix> stages);

SMatrix abcd_to_s(const AbcdMatrix& m, double z0 = default_z0);
AbcdMatrix s_to_abcd(const SMatrix& s);

SParams abcd_to_s(const Abcd& m, double z0 = default_z0);
Abcd s_to_abcd(const SParams& s, double z0 = default_z0);

/// Matched attenuator: S11 = S22 = 0, S21 = S12 = 10^(-db/20).
SMatrix attenuator(double db, const FrequencyGrid& grid, double z0 = default_z0);

}  // namespace cryomux::rfnet
