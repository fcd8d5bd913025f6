#include "cryomux/rfnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cryomux/error.hpp"

namespace cryomux::rfnet {

namespace {

// Returns true when the value was clamped.
bool clamp_in_place(complex& z) {
  const double mag = std::abs(z);
  if (std::isfinite(mag) && mag <= clamp_magnitude) return false;
  if (std::isfinite(z.real()) && std::isfinite(z.imag()) && mag > 0.0) {
    z *= clamp_magnitude / mag;
  } else if (std::isinf(z.imag()) && std::isfinite(z.real())) {
    z = complex(0.0, std::copysign(clamp_magnitude, z.imag()));
  } else {
    z = complex(clamp_magnitude, 0.0);
  }
  return true;
}

void require_grid_match(std::size_t n, const FrequencyGrid& grid) {
  if (grid.size() == 0) throw Error(ErrorKind::invalid_input, "empty frequency grid");
  if (n != grid.size()) {
    throw Error(ErrorKind::invalid_input,
                "value count " + std::to_string(n) + " does not match grid size " +
                    std::to_string(grid.size()));
  }
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::vector<double> points_hz) : points_(std::move(points_hz)) {
  if (points_.empty()) throw Error(ErrorKind::invalid_input, "frequency grid is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i] > 0.0) || !std::isfinite(points_[i])) {
      throw Error(ErrorKind::invalid_input, "frequency grid values must be positive and finite");
    }
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      throw Error(ErrorKind::invalid_input, "frequency grid must be strictly increasing");
    }
  }
}

FrequencyGrid FrequencyGrid::linspace(double start_hz, double stop_hz, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_input, "linspace needs at least one point");
  if (n == 1) return FrequencyGrid({start_hz});
  std::vector<double> pts(n);
  const double step = (stop_hz - start_hz) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) pts[i] = start_hz + step * static_cast<double>(i);
  pts.back() = stop_hz;
  return FrequencyGrid(std::move(pts));
}

AbcdMatrix::AbcdMatrix(FrequencyGrid grid, std::vector<Abcd> entries, bool clamped)
    : grid_(std::move(grid)), entries_(std::move(entries)), clamped_(clamped) {
  require_grid_match(entries_.size(), grid_);
}

AbcdMatrix AbcdMatrix::identity(const FrequencyGrid& grid) {
  return AbcdMatrix(grid, std::vector<Abcd>(grid.size()));
}

SMatrix::SMatrix(FrequencyGrid grid, std::vector<SParams> entries, double z0, bool clamped)
    : grid_(std::move(grid)), entries_(std::move(entries)), z0_(z0), clamped_(clamped) {
  require_grid_match(entries_.size(), grid_);
  if (!(z0_ > 0.0)) throw Error(ErrorKind::invalid_input, "reference impedance must be positive");
}

std::vector<complex> SMatrix::s21() const {
  std::vector<complex> out(entries_.size());
  std::transform(entries_.begin(), entries_.end(), out.begin(),
                 [](const SParams& s) { return s.s21; });
  return out;
}

AbcdMatrix series_element(std::span<const complex> impedance, const FrequencyGrid& grid) {
  require_grid_match(impedance.size(), grid);
  std::vector<Abcd> out(grid.size());
  bool clamped = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    complex z = impedance[i];
    clamped |= clamp_in_place(z);
    out[i] = {1.0, z, 0.0, 1.0};
  }
  return AbcdMatrix(grid, std::move(out), clamped);
}

AbcdMatrix shunt_element(std::span<const complex> admittance, const FrequencyGrid& grid) {
  require_grid_match(admittance.size(), grid);
  std::vector<Abcd> out(grid.size());
  bool clamped = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    complex y = admittance[i];
    clamped |= clamp_in_place(y);
    out[i] = {1.0, 0.0, y, 1.0};
  }
  return AbcdMatrix(grid, std::move(out), clamped);
}

complex element_impedance(ElementKind kind, double value, double omega) {
  switch (kind) {
    case ElementKind::resistor:
      return {value, 0.0};
    case ElementKind::inductor:
      return {0.0, omega * value};
    case ElementKind::capacitor:
      return complex(0.0, -1.0 / (omega * value));
  }
  return {};
}

AbcdMatrix lumped(ElementKind kind, double value, Orientation orientation,
                  const FrequencyGrid& grid) {
  if (!(value > 0.0)) {
    throw Error(ErrorKind::invalid_input, "lumped element value must be positive");
  }
  std::vector<complex> z(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double omega = hz_to_rad(grid[i]);
    if (std::isinf(value)) {
      // R, L -> infinity is an open; C -> infinity is a short.
      z[i] = kind == ElementKind::capacitor ? complex(0.0)
                                            : complex(std::numeric_limits<double>::infinity());
    } else {
      z[i] = element_impedance(kind, value, omega);
    }
  }
  if (orientation == Orientation::series) return series_element(z, grid);

  std::vector<complex> y(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::isinf(std::abs(z[i]))) {
      y[i] = 0.0;
    } else if (z[i] == complex(0.0)) {
      y[i] = std::numeric_limits<double>::infinity();
    } else {
      y[i] = 1.0 / z[i];
    }
  }
  return shunt_element(y, grid);
}

AbcdMatrix cascade(std::span<const AbcdMatrix> stages) {
  if (stages.empty()) throw Error(ErrorKind::invalid_input, "cascade of zero stages");
  const FrequencyGrid& grid = stages.front().grid();
  std::vector<Abcd> acc(stages.front().entries().begin(), stages.front().entries().end());
  bool clamped = stages.front().clamped();
  for (std::size_t k = 1; k < stages.size(); ++k) {
    if (!(stages[k].grid() == grid)) {
      throw Error(ErrorKind::invalid_input, "cascade stages use different frequency grids");
    }
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] * stages[k][i];
    clamped |= stages[k].clamped();
  }
  return AbcdMatrix(grid, std::move(acc), clamped);
}

AbcdMatrix cascade(std::initializer_list<AbcdMatrix> stages) {
  return cascade(std::span<const AbcdMatrix>(stages.begin(), stages.size()));
}

SParams abcd_to_s(const Abcd& m, double z0) {
  if (!(z0 > 0.0)) throw Error(ErrorKind::invalid_input, "reference impedance must be positive");
  const complex b = m.b / z0;
  const complex c = m.c * z0;
  const complex den = m.a + b + c + m.d;
  if (den == complex(0.0) || !std::isfinite(std::abs(den))) {
    throw Error(ErrorKind::numeric_singularity, "ABCD to S denominator is zero");
  }
  return {(m.a + b - c - m.d) / den, 2.0 / den, 2.0 * m.determinant() / den,
          (-m.a + b - c + m.d) / den};
}

Abcd s_to_abcd(const SParams& s, double z0) {
  if (!(z0 > 0.0)) throw Error(ErrorKind::invalid_input, "reference impedance must be positive");
  if (s.s21 == complex(0.0)) {
    throw Error(ErrorKind::numeric_singularity, "S to ABCD needs non-zero S21");
  }
  const complex two_s21 = 2.0 * s.s21;
  const complex cross = s.s12 * s.s21;
  return {((1.0 + s.s11) * (1.0 - s.s22) + cross) / two_s21,
          z0 * ((1.0 + s.s11) * (1.0 + s.s22) - cross) / two_s21,
          ((1.0 - s.s11) * (1.0 - s.s22) - cross) / (two_s21 * z0),
          ((1.0 - s.s11) * (1.0 + s.s22) + cross) / two_s21};
}

SMatrix abcd_to_s(const AbcdMatrix& m, double z0) {
  std::vector<SParams> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = abcd_to_s(m[i], z0);
  return SMatrix(m.grid(), std::move(out), z0, m.clamped());
}

AbcdMatrix s_to_abcd(const SMatrix& s) {
  std::vector<Abcd> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s_to_abcd(s[i], s.z0());
  return AbcdMatrix(s.grid(), std::move(out), s.clamped());
}

SMatrix attenuator(double db, const FrequencyGrid& grid, double z0) {
  if (!(db >= 0.0) || !std::isfinite(db)) {
    throw Error(ErrorKind::invalid_input, "attenuation must be a finite value >= 0 dB");
  }
  const double t = db_to_amplitude(-db);
  return SMatrix(grid, std::vector<SParams>(grid.size(), SParams{0.0, t, t, 0.0}), z0);
}

}  // namespace cryomux::rfnet
