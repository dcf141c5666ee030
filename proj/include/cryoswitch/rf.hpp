#pragma once

#include <complex>
#include <vector>

#include "cryoswitch/core_model.hpp"

namespace cryoswitch {

inline constexpr double default_z0 = 50.0;
// Floor for |S21| in dB so an open circuit still has a finite isolation figure.
inline constexpr double s21_db_floor = -300.0;

struct TwoPortPoint {
    double frequency = 0.0;
    double s21_mag = 0.0;
    double s21_db = 0.0;
    double s11_mag = 0.0;
    double s11_db = 0.0;
};

TwoPortPoint s21_series(std::complex<double> z_series, double z0, double f);

std::vector<TwoPortPoint> insertion_loss_sweep(const SwitchParams& p, double T, double f_lo = 4e9,
                                               double f_hi = 8e9, int n = 101, double z0 = default_z0);
std::vector<TwoPortPoint> isolation_sweep(const SwitchParams& p, double T, double f_lo = 4e9,
                                          double f_hi = 8e9, int n = 101, double z0 = default_z0);

inline double insertion_loss_db(const TwoPortPoint& pt) { return -pt.s21_db; }
inline double isolation_db(const TwoPortPoint& pt) { return -pt.s21_db; }

}  // namespace cryoswitch
