#include "gdicke/graphene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gdicke/special.hpp"

namespace gdicke {

using units::pi;

Conductivity conductivity(double fermi_energy, double relax_rate, double omega, double log_floor) {
    if (!(fermi_energy > 0)) throw DomainError("fermi_energy must be positive");
    if (!(relax_rate >= 0)) throw DomainError("relax_rate must be nonnegative");
    if (omega < 0) return {std::conj(conductivity(fermi_energy, relax_rate, -omega, log_floor).value)};
    if (omega == 0 && relax_rate == 0) throw DomainError("DC conductivity diverges without relaxation");
    const cplx i(0, 1);
    const cplx drude = (fermi_energy / pi) * i / cplx(omega, relax_rate);
    const double two_ef = 2 * fermi_energy;
    double step = 0;
    if (omega > two_ef) step = 1;
    else if (omega == two_ef) step = 0.5;
    const double ratio = std::max(std::abs((omega - two_ef) / (omega + two_ef)), log_floor);
    const cplx inter = 0.25 * (step + i * std::log(ratio) / pi);
    return {drude + inter};
}

LayerStack LayerStack::from(const SystemParams& p) {
    return LayerStack{p.eps_above, p.eps_below, SheetModel{p.fermi_energy, p.relax_rate()}};
}

Conductivity LayerStack::sigma(double omega) const {
    if (!sheet) return {cplx(0, 0)};
    return conductivity(sheet->fermi_energy, sheet->relax_rate, omega);
}

cplx LayerStack::sheet_factor(double omega) const {
    if (!sheet) return 0;
    if (omega == 0) throw DomainError("sheet factor is singular at omega = 0");
    return 4 * pi * units::fine_structure * units::hbar_c * sigma(omega).value / omega;
}

namespace {

cplx branch_sqrt(cplx arg) {
    cplx r = std::sqrt(arg);
    if (r.imag() < 0 || (r.imag() == 0 && r.real() < 0)) r = -r;
    return r;
}

}  // namespace

cplx normal_wavevector(double q2, double k) {
    const double d = q2 - k * k;
    return d >= 0 ? cplx(std::sqrt(d), 0) : cplx(0, std::sqrt(-d));
}

cplx fresnel_rp(double omega, double k_par, const LayerStack& stack) {
    if (k_par < 0) throw DomainError("k_par must be nonnegative");
    if (omega == 0) {
        if (stack.sheet) return 1.0;
        return (stack.eps_below - stack.eps_above) / (stack.eps_above + stack.eps_below);
    }
    if (omega < 0) return std::conj(fresnel_rp(-omega, k_par, stack));
    const double k0 = omega / units::hbar_c;
    const cplx k1z = normal_wavevector(stack.eps_above * k0 * k0, k_par);
    const cplx k2z = normal_wavevector(stack.eps_below * k0 * k0, k_par);
    const cplx s = stack.sheet_factor(omega);
    const cplx den = stack.eps_above * k2z + stack.eps_below * k1z + s * k1z * k2z;
    if (std::abs(den) == 0) throw DomainError("Fresnel denominator vanishes");
    return (-stack.eps_above * k2z + stack.eps_below * k1z + s * k1z * k2z) / den;
}

namespace {

struct Dispersion {
    double e1, e2, q1, q2;
    cplx s;
    cplx kz1(cplx k) const { return branch_sqrt(q1 - k * k); }
    cplx kz2(cplx k) const { return branch_sqrt(q2 - k * k); }
    cplx value(cplx k) const {
        const cplx a = kz1(k), b = kz2(k);
        return e1 * b + e2 * a + s * a * b;
    }
    double scale(cplx k) const {
        const cplx a = kz1(k), b = kz2(k);
        return std::max({std::abs(e1 * b), std::abs(e2 * a), std::abs(s * a * b)});
    }
    cplx derivative(cplx k) const {
        const cplx a = kz1(k), b = kz2(k);
        return -k * (e1 / b + e2 / a + s * (b / a + a / b));
    }
};

Dispersion make_dispersion(double omega, const LayerStack& stack) {
    const double k0 = omega / units::hbar_c;
    return {stack.eps_above, stack.eps_below, stack.eps_above * k0 * k0, stack.eps_below * k0 * k0,
            stack.sheet_factor(omega)};
}

}  // namespace

double sp_relative_residual(double omega, cplx k, const LayerStack& stack) {
    const Dispersion d = make_dispersion(omega, stack);
    return std::abs(d.value(k)) / d.scale(k);
}

cplx sp_dispersion(double omega, const LayerStack& stack) {
    if (!(omega > 0)) throw DomainError("sp_dispersion needs omega > 0");
    if (!stack.sheet) throw NoBoundMode("no conducting sheet");
    const Dispersion d = make_dispersion(omega, stack);
    const cplx i(0, 1);
    cplx k = i * (d.e1 + d.e2) / d.s;
    const double light = std::sqrt(std::max(d.q1, d.q2));
    if (k.real() <= light) throw NoBoundMode("quasi-static plasmon root is not bound");
    double res = std::abs(d.value(k)) / d.scale(k);
    for (int it = 0; it < 200 && res > 1e-14; ++it) {
        const cplx step = d.value(k) / d.derivative(k);
        double damp = 1;
        cplx trial = k - step;
        double trial_res = std::abs(d.value(trial)) / d.scale(trial);
        while (!(trial_res < res) && damp > 1e-6) {
            damp *= 0.5;
            trial = k - damp * step;
            trial_res = std::abs(d.value(trial)) / d.scale(trial);
        }
        if (!(trial_res < res)) break;
        k = trial;
        res = trial_res;
    }
    if (!(res < 1e-10)) throw ConvergenceError("plasmon dispersion Newton iteration stalled", res);
    if (k.real() <= light || k.imag() < 0) throw NoBoundMode("plasmon root is not a bound mode");
    return k;
}

double Weight::operator()(double k) const {
    switch (kind) {
        case Kind::bessel: return bessel_j0(k * scale);
        case Kind::gaussian: return std::exp(-k * k * scale * scale);
        default: return 1.0;
    }
}

SommerfeldIntegrand::SommerfeldIntegrand(double omega, double z, const LayerStack& stack)
    : omega_signed_(omega),
      conj_(omega < 0),
      static_(omega == 0),
      z_(z),
      eps1_(stack.eps_above),
      eps2_(stack.eps_below) {
    if (!(z > 0)) throw DomainError("height must be positive");
    if (static_) {
        static_rp_ = fresnel_rp(0, 1.0, stack).real();
        return;
    }
    const double w = std::abs(omega);
    k0_ = w / units::hbar_c;
    k1_ = k0_ * std::sqrt(eps1_);
    k2_ = k0_ * std::sqrt(eps2_);
    s_ = stack.sheet_factor(w);
    u1_ = pi / 2;
    u2_ = u1_ + std::acosh(2.0);
    k_evanescent_ = std::max(2 * k1_, k2_ * (1 + 1e-12));
    ev_ = {k1_ * k1_, k2_ * k2_, eps1_, eps2_, s_.real(), s_.imag(), z_};
    try {
        k_sp_ = sp_dispersion(w, stack);
    } catch (const NoBoundMode&) {
    } catch (const ConvergenceError&) {
    }
}

double SommerfeldIntegrand::k_cutoff(double decay_floor) const {
    const double reach = -std::log(decay_floor) / (2 * z_);
    double k = std::max(k1_, k2_) + reach;
    if (k_sp_ && k_sp_->real() < k) k = std::max(k, k_sp_->real() + 10 * k_sp_->imag());
    return k;
}

std::vector<double> SommerfeldIntegrand::breakpoints(double decay_floor, int sp_splits) const {
    const double kmax = k_cutoff(decay_floor);
    std::vector<double> b{0.0, 1 / z_, 4 / z_, kmax};
    if (!static_) {
        b.push_back(k1_);
        b.push_back(2 * k1_);
        if (k2_ != k1_) b.push_back(k2_);
        if (k_sp_) {
            const double c = k_sp_->real(), h = std::max(k_sp_->imag(), 1e-12 * c);
            const int n = std::max(1, sp_splits);
            for (int j = 0; j <= n; ++j) b.push_back(c - 5 * h + 10 * h * j / n);
            b.push_back(c);
        }
    }
    std::vector<double> out;
    for (double v : b)
        if (v >= 0 && v <= kmax) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double SommerfeldIntegrand::u_of_k(double k) const {
    if (static_) return k;
    if (k <= k1_) return std::asin(std::min(1.0, k / k1_));
    if (k <= 2 * k1_) return u1_ + std::acosh(k / k1_);
    return u2_ + (k - 2 * k1_);
}

double SommerfeldIntegrand::k_of_u(double u) const {
    if (static_) return u;
    if (u <= u1_) return k1_ * std::sin(u);
    if (u <= u2_) return k1_ * std::cosh(u - u1_);
    return 2 * k1_ + (u - u2_);
}

double SommerfeldIntegrand::dk_du(double u) const {
    if (static_ || u > u2_) return 1.0;
    if (u <= u1_) return k1_ * std::cos(u);
    return k1_ * std::sinh(u - u1_);
}

cplx SommerfeldIntegrand::reduced(double k, cplx k1z) const {
    const cplx i(0, 1);
    // k2z^2 = k1z^2 + (eps2 - eps1) k0^2. Building k2z from k1z keeps the two in
    // step near the light line, where the Fresnel numerator cancels.
    const double k1z2 = k1z.imag() == 0 ? k1z.real() * k1z.real() : -k1z.imag() * k1z.imag();
    const double d = k1z2 + (eps2_ - eps1_) * k0_ * k0_;
    const cplx k2z = d >= 0 ? cplx(std::sqrt(d), 0) : cplx(0, std::sqrt(-d));
    const cplx num = -eps1_ * k2z + eps2_ * k1z + s_ * k1z * k2z;
    const cplx den = eps1_ * k2z + eps2_ * k1z + s_ * k1z * k2z;
    return i * k * k * k * (num / den) * std::exp(2.0 * i * k1z * z_) / (4 * pi * eps1_);
}

cplx SommerfeldIntegrand::value(double k) const {
    if (static_) return static_rp_ * k * k * std::exp(-2 * k * z_) / (4 * pi * eps1_);
    if (k >= k_evanescent_) {
        cplx out;
        kernels::evanescent_sommerfeld(ev_, &k, 1, &out);
        return finish(out);
    }
    const cplx k1z = normal_wavevector(k1_ * k1_, k);
    return finish(reduced(k, k1z) / k1z);
}

void SommerfeldIntegrand::eval(std::span<const double> u, std::span<double> k,
                               std::span<cplx> f) const {
    const std::size_t n = u.size();
    if (static_) {
        for (std::size_t j = 0; j < n; ++j) {
            k[j] = u[j];
            f[j] = static_rp_ * u[j] * u[j] * std::exp(-2 * u[j] * z_) / (4 * pi * eps1_);
        }
        return;
    }
    const cplx i(0, 1);
    // Evanescent nodes are contiguous at the end of an increasing batch.
    std::size_t first_ev = n;
    for (std::size_t j = 0; j < n; ++j) {
        const double uj = u[j];
        if (uj <= u1_) {
            const double kk = k1_ * std::sin(uj);
            k[j] = kk;
            f[j] = reduced(kk, cplx(k1_ * std::cos(uj), 0));
        } else if (uj <= u2_) {
            const double t = uj - u1_;
            const double kk = k1_ * std::cosh(t);
            k[j] = kk;
            f[j] = -i * reduced(kk, cplx(0, k1_ * std::sinh(t)));
        } else {
            const double kk = 2 * k1_ + (uj - u2_);
            k[j] = kk;
            if (kk >= k_evanescent_) {
                if (first_ev == n) first_ev = j;
                continue;
            }
            const cplx k1z = normal_wavevector(k1_ * k1_, kk);
            f[j] = reduced(kk, k1z) / k1z;
        }
        if (first_ev != n) {
            // Non-monotone batch: fall back to pointwise evaluation.
            for (std::size_t m = first_ev; m < j; ++m)
                if (k[m] >= k_evanescent_) kernels::evanescent_sommerfeld(ev_, &k[m], 1, &f[m]);
            first_ev = n;
        }
    }
    if (first_ev < n) kernels::evanescent_sommerfeld(ev_, &k[first_ev], n - first_ev, &f[first_ev]);
    if (conj_)
        for (auto& v : f) v = std::conj(v);
}

namespace {

std::vector<double> path_breakpoints(const SommerfeldIntegrand& I, const Weight& w,
                                     const SommerfeldOptions& opt, double& kmax) {
    kmax = I.k_cutoff(opt.decay_floor);
    if (w.kind == Weight::Kind::gaussian && w.scale > 0)
        kmax = std::min(kmax, std::sqrt(-std::log(opt.decay_floor)) / w.scale);
    std::vector<double> kb = I.breakpoints(opt.decay_floor, opt.sp_splits);
    kb.push_back(kmax);
    if (w.kind == Weight::Kind::bessel && w.scale > 0) {
        const double period = pi / w.scale;
        const double count = kmax / period;
        if (count > 1e6) throw DomainError("separation too large for direct Bessel quadrature");
        for (double kk = period; kk < kmax; kk += period) kb.push_back(kk);
    }
    std::vector<double> ub;
    for (double kk : kb)
        if (kk <= kmax) ub.push_back(I.u_of_k(kk));
    std::sort(ub.begin(), ub.end());
    ub.erase(std::unique(ub.begin(), ub.end()), ub.end());
    return ub;
}

}  // namespace

QuadResult<cplx> sommerfeld_integral(double omega, double z, const LayerStack& stack,
                                     const Weight& w, const SommerfeldOptions& opt) {
    const SommerfeldIntegrand I(omega, z, stack);
    double kmax = 0;
    const std::vector<double> ub = path_breakpoints(I, w, opt, kmax);
    std::vector<double> ks;
    auto f = [&](std::span<const double> u, std::span<cplx> out) {
        ks.resize(u.size());
        I.eval(u, ks, out);
        if (w.kind != Weight::Kind::unit)
            for (std::size_t j = 0; j < u.size(); ++j) out[j] *= w(ks[j]);
    };
    QuadOptions qo;
    qo.rel_tol = opt.rel_tol;
    qo.abs_tol = opt.abs_tol;
    qo.max_intervals = opt.max_intervals;
    return integrate_adaptive<cplx>(f, ub, qo);
}

cplx gzz_scattering(double delta_r, double z, double omega, const LayerStack& stack,
                    const SommerfeldOptions& opt) {
    if (!(delta_r >= 0)) throw DomainError("separation must be nonnegative");
    const Weight w = delta_r > 0 ? Weight::bessel(delta_r) : Weight::unit();
    const auto r = sommerfeld_integral(omega, z, stack, w, opt);
    if (!r.converged)
        throw ConvergenceError("Sommerfeld quadrature did not converge", r.error / std::abs(r.value));
    return r.value;
}

double coupling_prefactor(const SystemParams& p) {
    const double l = units::hbar_c / p.transition_freq;
    return 1.5 * pi * p.gamma0 * l * l * l;
}

CouplingValue coupling_h(double delta_r, double z, double omega, const SystemParams& p,
                         const SommerfeldOptions& opt) {
    const double pref = coupling_prefactor(p);
    if (pref == 0) return {cplx(0, 0), delta_r, z, omega};
    const cplx g = gzz_scattering(delta_r, z, omega, LayerStack::from(p), opt);
    cplx h = pref * g;
    if (omega == 0) h.imag(0);
    return {h, delta_r, z, omega};
}

CouplingTable::CouplingTable(double omega, const SystemParams& p, double r_max,
                             const SommerfeldOptions& opt)
    : r_max_(r_max), params_(p), omega_(omega), opt_(opt) {
    if (!(r_max > 0)) throw DomainError("table range must be positive");
    const LayerStack stack = LayerStack::from(p);
    const SommerfeldIntegrand I(omega, p.height, stack);
    double kmax = 0;
    const std::vector<double> ub = path_breakpoints(I, Weight::unit(), opt, kmax);

    // Panels resolving F itself, then refined so that each spans at most one
    // period of J0(k r_max).
    auto f = [&](std::span<const double> u, std::span<cplx> out) {
        std::vector<double> ks(u.size());
        I.eval(u, ks, out);
    };
    QuadOptions qo;
    qo.rel_tol = opt.rel_tol;
    qo.max_intervals = opt.max_intervals;
    qo.keep_panels = true;
    auto base = integrate_adaptive<cplx>(f, ub, qo);
    std::sort(base.panels.begin(), base.panels.end());
    const double dk = 2 * pi / r_max;
    std::vector<double> nodes_k, weights;
    std::vector<cplx> values;
    const auto& rule = gk21();
    std::vector<double> us(rule.size), ks(rule.size);
    std::vector<cplx> fs(rule.size);
    for (const auto& pnl : base.panels) {
        const double a = pnl[0], b = pnl[1];
        const double slope = std::max({I.dk_du(a), I.dk_du(b), I.dk_du(0.5 * (a + b))});
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) * slope / dk)));
        for (int q = 0; q < pieces; ++q) {
            const double pa = a + (b - a) * q / pieces, pb = a + (b - a) * (q + 1) / pieces;
            const double c = 0.5 * (pa + pb), h = 0.5 * (pb - pa);
            for (std::size_t j = 0; j < rule.size; ++j) us[j] = c + h * rule.nodes[j];
            I.eval(us, ks, fs);
            for (std::size_t j = 0; j < rule.size; ++j) {
                nodes_k.push_back(ks[j]);
                weights.push_back(h * rule.kronrod_weights[j]);
                values.push_back(fs[j]);
            }
        }
    }
    const double pref = coupling_prefactor(p);
    double spacing = std::min(p.height / 8, r_max / 64);
    if (I.sp_root()) spacing = std::min(spacing, 2 * pi / (12 * I.sp_root()->real()));
    const std::size_t n_r = std::min<std::size_t>(40000, static_cast<std::size_t>(r_max / spacing) + 2);
    const double step = r_max / static_cast<double>(n_r - 1);
    r_.resize(n_r);
    h_.resize(n_r);
    for (std::size_t m = 0; m < n_r; ++m) {
        const double r = step * static_cast<double>(m);
        cplx acc = 0;
        for (std::size_t j = 0; j < nodes_k.size(); ++j)
            acc += weights[j] * values[j] * bessel_j0(nodes_k[j] * r);
        r_[m] = r;
        h_[m] = pref * acc;
        if (omega == 0) h_[m].imag(0);
    }
}

cplx CouplingTable::operator()(double r) const {
    if (r > r_max_) return coupling_h(r, params_.height, omega_, params_, opt_).value;
    // Local cubic (Catmull-Rom style Lagrange) interpolation on the uniform grid.
    const double step = r_[1] - r_[0];
    const double x = r / step;
    std::size_t m = static_cast<std::size_t>(x);
    if (m + 2 >= r_.size()) m = r_.size() - 3;
    const std::size_t i0 = m == 0 ? 0 : m - 1;
    const std::size_t base = std::min(i0, r_.size() - 4);
    const double t = x - static_cast<double>(base);
    cplx acc = 0;
    for (int a = 0; a < 4; ++a) {
        double l = 1;
        for (int b = 0; b < 4; ++b)
            if (b != a) l *= (t - b) / static_cast<double>(a - b);
        acc += l * h_[base + a];
    }
    return acc;
}

double kramers_kronig_check(const ComplexSpectrum& spectrum, const KramersKronigOptions& opt) {
    const FrequencyGrid& g = *spectrum.grid;
    const auto w = g.nonnegative();
    const std::size_t z = g.zero_index();
    const std::size_t n = w.size();
    std::vector<double> re(n), im(n);
    double max_re = 0, max_im = 0;
    for (std::size_t j = 0; j < n; ++j) {
        re[j] = spectrum.values[z + j].real();
        im[j] = spectrum.values[z + j].imag();
        max_re = std::max(max_re, std::abs(re[j]));
        max_im = std::max(max_im, std::abs(im[j]));
    }
    if (max_re == 0 && max_im == 0) return 0;
    const double cutoff = w[n - 1];
    // Past the cutoff Im is continued as Im(W) (W / w)^p, with p read off the last stretch of the grid.
    double tail_p = 0;
    const bool with_tail = opt.tail == KramersKronigOptions::Tail::power_law;
    if (with_tail) {
        auto node_at = [&](double frac) {
            return static_cast<std::size_t>(std::lower_bound(w.begin(), w.end(), frac * cutoff) - w.begin());
        };
        auto exponent = [&](std::size_t i, std::size_t j) {
            return std::log(im[i] / im[j]) / std::log(w[j] / w[i]);
        };
        const std::size_t i6 = node_at(0.6), i8 = node_at(0.8);
        tail_p = exponent(i8, n - 1);
        const double p_before = exponent(i6, i8);
        if (!(im[n - 1] * im[i8] > 0 && im[i6] * im[i8] > 0) || !(tail_p > 0 && tail_p <= 4) ||
            std::abs(p_before - tail_p) > opt.tail_tolerance)
            throw DomainError("spectrum tail is not a steady power law near the grid cutoff");
    } else if (std::abs(im[n - 1]) > opt.tail_fraction * max_im) {
        throw DomainError("spectrum has not decayed at the grid cutoff; enlarge the cutoff");
    }
    // Integral over (W, inf) of Im(w') w' / (w'^2 - c^2), expanded in (c / W)^2.
    auto tail_integral = [&](double c) {
        const double r2 = (c / cutoff) * (c / cutoff);
        double sum = 0, pw = 1;
        for (int k = 0; k < 2000; ++k) {
            const double term = pw / (tail_p + 2 * k);
            sum += term;
            if (term < 1e-16 * sum) break;
            pw *= r2;
        }
        return im[n - 1] * sum;
    };

    // Im is interpolated linearly; each segment integral of Im(w')/(w' - c) is
    // s (b - a) + Im(c) log|(b - c)/(a - c)| with Im(c) the linear extension.
    auto segment_sum = [&](double c, std::size_t skip_node) {
        double sum = 0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double a = w[j], b = w[j + 1];
            const double s = (im[j + 1] - im[j]) / (b - a);
            const double fc = im[j] + s * (c - a);
            double term = s * (b - a);
            const bool a_hit = (j == skip_node) || a == c;
            const bool b_hit = (j + 1 == skip_node) || b == c;
            if (a_hit && b_hit) {
            } else if (a_hit) {
                if (fc != 0) term += fc * std::log(std::abs(b - c));
            } else if (b_hit) {
                if (fc != 0) term -= fc * std::log(std::abs(a - c));
            } else {
                term += fc * std::log(std::abs((b - c) / (a - c)));
            }
            sum += term;
        }
        return sum;
    };
    double worst = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(im[j]) > 0.5 * max_im || w[j] > opt.max_check_fraction * cutoff) continue;
        const double c = w[j];
        const double pv = 0.5 * (segment_sum(c, j) + segment_sum(-c, j == 0 ? 0 : n));
        const double tail = with_tail ? tail_integral(c) : 0.0;
        const double rec = (2 / pi) * (pv + tail);
        worst = std::max(worst, std::abs(rec - re[j]));
    }
    return max_re > 0 ? worst / max_re : worst;
}

}  // namespace gdicke
