#include "cryoswitch/rf.hpp"

#include <algorithm>
#include <cmath>

#include "cryoswitch/errors.hpp"

namespace cryoswitch {

namespace {

double to_db(double mag) { return std::max(20.0 * std::log10(mag), s21_db_floor); }

std::vector<double> grid(double f_lo, double f_hi, int n) {
    if (!(f_lo < f_hi)) throw validation_error("sweep needs f_lo < f_hi");
    if (n < 2) throw validation_error("sweep needs at least 2 points");
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = f_lo + (f_hi - f_lo) * i / (n - 1);
    return f;
}

}  // namespace

TwoPortPoint s21_series(std::complex<double> z, double z0, double f) {
    if (!(z0 > 0)) throw validation_error("z0 must be > 0");
    TwoPortPoint pt;
    pt.frequency = f;
    if (std::isinf(std::abs(z))) {
        pt.s21_mag = 0.0;
        pt.s11_mag = 1.0;
    } else {
        std::complex<double> den = 2.0 * z0 + z;
        pt.s21_mag = std::abs(2.0 * z0 / den);
        pt.s11_mag = std::abs(z / den);
    }
    pt.s21_db = to_db(pt.s21_mag);
    pt.s11_db = to_db(pt.s11_mag);
    return pt;
}

std::vector<TwoPortPoint> insertion_loss_sweep(const SwitchParams& p, double T, double f_lo, double f_hi,
                                               int n, double z0) {
    double r = on_resistance(p, T);
    std::vector<TwoPortPoint> out;
    for (double f : grid(f_lo, f_hi, n)) out.push_back(s21_series({r, 0.0}, z0, f));
    return out;
}

std::vector<TwoPortPoint> isolation_sweep(const SwitchParams& p, double /*T*/, double f_lo, double f_hi, int n,
                                          double z0) {
    const double pi = std::acos(-1.0);
    std::vector<TwoPortPoint> out;
    for (double f : grid(f_lo, f_hi, n)) {
        double wc = 2.0 * pi * f * p.c_off;
        std::complex<double> z = wc > 0 ? std::complex<double>(0.0, -1.0 / wc)
                                        : std::complex<double>(0.0, -HUGE_VAL);
        out.push_back(s21_series(z, z0, f));
    }
    return out;
}

}  // namespace cryoswitch
