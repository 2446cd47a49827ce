#include "fracns/turbulence.hpp"

#include "fracns/solver.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fracns {

int shell_index(const Wavevector& k) { return static_cast<int>(std::floor(std::sqrt(double(k.norm_sq())) + 0.5)); }

int max_shell(const BoxSpec& box) {
    const int h = box.n() / 2;
    return shell_index({h, h, h});
}

double ShellSpectrum::total_energy() const { return std::accumulate(e_k.begin(), e_k.end(), mean_energy); }

ShellSpectrum shell_spectrum(const SpectralField& u, double nu) {
    const int kmax = max_shell(u.box);
    ShellSpectrum out;
    out.nu = nu;
    out.k.resize(kmax);
    std::iota(out.k.begin(), out.k.end(), 1);
    out.e_k.assign(kmax, 0.0);
    out.t_k.assign(kmax, 0.0);
    out.pi_k.assign(kmax, 0.0);
    double dissipation = 0.0;
    for_each_mode(u.box, [&](std::size_t i, Wavevector k) {
        const double e = 0.5 * (std::norm(u.c[0][i]) + std::norm(u.c[1][i]) + std::norm(u.c[2][i]));
        const int sh = shell_index(k);
        if (sh == 0) {
            out.mean_energy += e;
            return;
        }
        out.e_k[sh - 1] += e;
        dissipation += k.norm_sq() * e;
    });
    out.eps = 2.0 * nu * dissipation;
    return out;
}

double sobolev_moment(const SpectralField& u, double s) {
    double acc = 0.0;
    for_each_mode(u.box, [&](std::size_t i, Wavevector k) {
        const int k2 = k.norm_sq();
        if (k2 == 0 && s != 0.0) return;
        const double w = s == 0.0 ? 1.0 : std::pow(double(k2), s);
        acc += w * 0.5 * (std::norm(u.c[0][i]) + std::norm(u.c[1][i]) + std::norm(u.c[2][i]));
    });
    return acc;
}

TransferFlux transfer_flux(const SpectralField& u) {
    const auto n = nonlinear_term(u);
    const int kmax = max_shell(u.box);
    TransferFlux out;
    out.t_k.assign(kmax, 0.0);
    out.pi_k.assign(kmax, 0.0);
    double mean_part = 0.0, uu = 0.0, nn = 0.0;
    for_each_mode(u.box, [&](std::size_t i, Wavevector k) {
        double t = 0.0;
        for (int d = 0; d < 3; ++d) {
            t += (std::conj(u.c[d][i]) * n.c[d][i]).real();
            uu += std::norm(u.c[d][i]);
            nn += std::norm(n.c[d][i]);
        }
        const int sh = shell_index(k);
        if (sh == 0) mean_part += t;
        else out.t_k[sh - 1] += t;
    });
    out.scale = std::sqrt(uu * nn);
    // The mean mode of N is zero, so mean_part only carries rounding.
    out.total = std::accumulate(out.t_k.begin(), out.t_k.end(), mean_part);
    double cum = 0.0;
    for (int j = 0; j < kmax; ++j) {
        cum += out.t_k[j];
        out.pi_k[j] = -cum;
    }
    return out;
}

void attach_transfer(ShellSpectrum& spec, const SpectralField& u) {
    auto tf = transfer_flux(u);
    spec.t_k = std::move(tf.t_k);
    spec.pi_k = std::move(tf.pi_k);
}

FluxDeviationReport flux_deviation_bound(std::span<const double> pi_k, double eps, int k0, double s, double delta) {
    if (!(eps > 0.0)) throw std::invalid_argument("flux_deviation_bound: eps must be > 0");
    if (k0 < 1) throw std::invalid_argument("flux_deviation_bound: k0 must be >= 1");
    FluxDeviationReport out;
    out.weight_exponent = delta * (2.0 * s - 1.0) / (2.0 * s);
    for (std::size_t j = 0; j < pi_k.size(); ++j) {
        const int k = static_cast<int>(j) + 1;
        if (k < k0) continue;
        const double w = std::pow(1.0 + std::log(double(k) / k0), out.weight_exponent);
        const double r = std::abs(pi_k[j] - eps) * w / eps;
        out.k.push_back(k);
        out.ratio.push_back(r);
        out.empirical_c = std::max(out.empirical_c, r);
    }
    return out;
}

// ---------------------------------------------------------------------------

StructureFunctions structure_functions(const PhysicalField& u, const std::vector<double>& orders, int max_r) {
    const int n = u.box.n();
    if (orders.empty()) throw std::invalid_argument("structure_functions: orders must be nonempty");
    if (max_r < 0 || max_r >= n / 2) throw std::invalid_argument("structure_functions: need 0 <= max_r < n/2");

    StructureFunctions out;
    out.dx = u.box.dx();
    out.orders = orders;
    out.r.resize(max_r + 1);
    std::iota(out.r.begin(), out.r.end(), 0);
    const std::size_t no = orders.size();
    for (auto& ax : out.per_axis) ax.assign(no, std::vector<double>(max_r + 1, 0.0));
    out.s_p.assign(no, std::vector<double>(max_r + 1, 0.0));

    const double inv_count = 1.0 / double(u.box.size());
    std::vector<double> acc(no);
    for (int axis = 0; axis < 3; ++axis) {
        for (int r = 1; r <= max_r; ++r) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (int i3 = 0; i3 < n; ++i3)
                for (int i2 = 0; i2 < n; ++i2)
                    for (int i1 = 0; i1 < n; ++i1) {
                        int j[3] = {i1, i2, i3};
                        j[axis] = (j[axis] + r) % n;
                        const std::size_t a = u.box.index(i1, i2, i3);
                        const std::size_t b = u.box.index(j[0], j[1], j[2]);
                        double m2 = 0.0;
                        for (int d = 0; d < 3; ++d) {
                            const double du = u.v[d][b] - u.v[d][a];
                            m2 += du * du;
                        }
                        for (std::size_t o = 0; o < no; ++o)
                            acc[o] += orders[o] == 2.0 ? m2 : std::pow(std::sqrt(m2), orders[o]);
                    }
            for (std::size_t o = 0; o < no; ++o) out.per_axis[axis][o][r] = acc[o] * inv_count;
        }
    }
    for (std::size_t o = 0; o < no; ++o)
        for (int r = 0; r <= max_r; ++r)
            out.s_p[o][r] = (out.per_axis[0][o][r] + out.per_axis[1][o][r] + out.per_axis[2][o][r]) / 3.0;
    return out;
}

// ---------------------------------------------------------------------------

MultifractalParams MultifractalParams::make(double s, double delta) {
    if (!(s > 0.5 && s < 1.5)) throw std::domain_error("MultifractalParams: s must lie in (1/2, 3/2)");
    if (!(delta >= 0.0)) throw std::domain_error("MultifractalParams: delta must be >= 0");
    MultifractalParams p;
    p.s = s;
    p.delta = delta;
    p.sigma2 = (3.0 - 2.0 * s) / (2.0 * s - 1.0);
    return p;
}

double zeta_p(double p, const MultifractalParams& m) {
    return p / 3.0 - p * (p - 3.0) * m.sigma2 / (3.0 * (1.0 + m.delta));
}

double singularity_spectrum_d0(double h, const MultifractalParams& m) {
    const double dh = h - m.h0;
    return 3.0 - dh * dh / (2.0 * m.sigma2);
}

double singularity_spectrum(double h, const MultifractalParams& m) {
    const double d0 = singularity_spectrum_d0(h, m);
    return d0 - m.delta / (1.0 + m.delta) * (3.0 - d0);
}

double legendre_zeta(double p, const MultifractalParams& m, int h_points) {
    if (h_points < 5) throw std::invalid_argument("legendre_zeta: need at least 5 grid points");
    if (h_points % 2 == 0) ++h_points;  // keep h0 on the initial grid
    auto f = [&](double h) { return p * h + 3.0 - singularity_spectrum(h, m); };

    double centre = m.h0;
    double half = 6.0 * std::sqrt(m.sigma2) * (1.0 + m.delta);
    for (int attempt = 0; attempt < 64; ++attempt) {
        const double lo = centre - half;
        const double step = 2.0 * half / (h_points - 1);
        int best = 0;
        double fbest = f(lo);
        for (int i = 1; i < h_points; ++i) {
            const double v = f(lo + i * step);
            if (v < fbest) {
                fbest = v;
                best = i;
            }
        }
        if (best == 0 || best == h_points - 1) {
            // Minimiser at the edge: recentre there and widen.
            centre = lo + best * step;
            half *= 2.0;
            continue;
        }
        const double h = lo + best * step;
        const double fm = f(h - step), fp = f(h + step);
        const double curv = fp - 2.0 * fbest + fm;
        if (!(curv > 0.0)) return fbest;
        const double hv = h - 0.5 * step * (fp - fm) / curv;
        return std::min(fbest, f(hv));
    }
    throw std::runtime_error("legendre_zeta: minimiser not bracketed");
}

// ---------------------------------------------------------------------------

double spectrum_model(double k, double k0, double eps, double beta_t, double delta, double c_kolm) {
    if (!(k0 > 0.0)) throw std::invalid_argument("spectrum_model: k0 must be > 0");
    if (k < k0) throw std::invalid_argument("spectrum_model: k must be >= k0");
    const double l = std::log(k / k0);
    return c_kolm * std::pow(eps, 2.0 / 3.0) * std::pow(k, -5.0 / 3.0) *
           (1.0 + beta_t * l / std::pow(1.0 + l, 1.0 + delta));
}

SpectrumFit fit_spectrum_model(const ShellSpectrum& spec, double k0, double delta) {
    if (!(spec.eps > 0.0)) throw std::invalid_argument("fit_spectrum_model: spectrum eps must be > 0");
    if (!(spec.nu > 0.0)) throw std::invalid_argument("fit_spectrum_model: spectrum nu must be > 0");
    SpectrumFit out;
    out.k_nu = std::pow(spec.eps, 0.25) * std::pow(spec.nu, -0.75);

    std::vector<double> base, shape;  // base = ln E - (2/3) ln eps + (5/3) ln k
    for (std::size_t j = 0; j < spec.k.size(); ++j) {
        const double k = spec.k[j];
        if (k < k0 || k > out.k_nu || !(spec.e_k[j] > 0.0)) continue;
        const double l = std::log(k / k0);
        base.push_back(std::log(spec.e_k[j]) - 2.0 / 3.0 * std::log(spec.eps) + 5.0 / 3.0 * std::log(k));
        shape.push_back(l / std::pow(1.0 + l, 1.0 + delta));
    }
    out.shells_used = static_cast<int>(base.size());
    if (base.size() < 5)
        throw InsufficientBandError("fit_spectrum_model: band [k0, k_nu] holds " + std::to_string(base.size()) +
                                    " shells, need at least 5");

    const double fmax = *std::max_element(shape.begin(), shape.end());
    // Sum of squared residuals at fixed beta; ln C is the mean offset.
    auto sse = [&](double beta, double* log_c) {
        double mean = 0.0;
        for (std::size_t i = 0; i < base.size(); ++i) mean += base[i] - std::log1p(beta * shape[i]);
        mean /= double(base.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < base.size(); ++i) {
            const double r = base[i] - std::log1p(beta * shape[i]) - mean;
            acc += r * r;
        }
        if (log_c) *log_c = mean;
        return acc;
    };

    const double lo = fmax > 0.0 ? -(1.0 - 1e-9) / fmax : -1e3;
    const double hi = 1e4;
    // Coarse scan in asinh(beta), then Brent between the neighbours of the best node.
    const int nodes = 2001;
    const double alo = std::asinh(lo), ahi = std::asinh(hi);
    int best = 0;
    double vbest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nodes; ++i) {
        const double b = std::sinh(alo + (ahi - alo) * i / (nodes - 1));
        const double v = sse(b, nullptr);
        if (v < vbest) {
            vbest = v;
            best = i;
        }
    }
    const double blo = std::sinh(alo + (ahi - alo) * std::max(best - 1, 0) / (nodes - 1));
    const double bhi = std::sinh(alo + (ahi - alo) * std::min(best + 1, nodes - 1) / (nodes - 1));
    const auto r = boost::math::tools::brent_find_minima([&](double b) { return sse(b, nullptr); }, blo, bhi, 52);
    double log_c = 0.0;
    out.beta_t = r.first;
    const double final_sse = sse(out.beta_t, &log_c);
    out.c_kolm = std::exp(log_c);
    out.residual = std::sqrt(final_sse / double(base.size()));
    return out;
}

BetaTimeFit fit_beta_time_law(std::span<const double> t, std::span<const double> beta, double gamma) {
    if (t.size() != beta.size()) throw std::invalid_argument("fit_beta_time_law: size mismatch");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (beta[i] > 0.0 && t[i] >= 0.0) {
            x.push_back(std::log1p(gamma * t[i]));
            y.push_back(std::log(beta[i]));
        }
    if (x.size() < 2) throw std::invalid_argument("fit_beta_time_law: need at least 2 positive beta samples");
    const double m = double(x.size());
    BetaTimeFit out;
    out.alpha_model = 2.0 * gamma / 3.0;

    double mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mean += y[i] + out.alpha_model * x[i];
    mean /= m;
    out.beta0 = std::exp(mean);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] + out.alpha_model * x[i] - mean;
        acc += r * r;
    }
    out.residual_model = std::sqrt(acc / m);

    const double sx = std::accumulate(x.begin(), x.end(), 0.0), sy = std::accumulate(y.begin(), y.end(), 0.0);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = m * sxx - sx * sx;
    if (denom > 0.0) {
        const double slope = (m * sxy - sx * sy) / denom;
        const double icpt = (sy - slope * sx) / m;
        out.alpha_free = -slope;
        acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - icpt - slope * x[i];
            acc += r * r;
        }
        out.residual_free = std::sqrt(acc / m);
    }
    return out;
}

double eps_decay_model(double t, double eps0, double gamma) {
    if (t < 0.0) throw std::invalid_argument("eps_decay_model: t must be >= 0");
    return eps0 / std::pow(1.0 + gamma * t, (3.0 * gamma - 1.0) / 2.0);
}

// ---------------------------------------------------------------------------

LimResult lim_field(const PhysicalField& u, int r) {
    const int n = u.box.n();
    if (r < 1 || r >= n / 2) throw std::invalid_argument("lim_field: need 1 <= r < n/2");
    LimResult out;
    out.values.assign(u.box.size(), 0.0);
    for (int axis = 0; axis < 3; ++axis)
        for (int i3 = 0; i3 < n; ++i3)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i1 = 0; i1 < n; ++i1) {
                    int j[3] = {i1, i2, i3};
                    j[axis] = (j[axis] + r) % n;
                    const std::size_t a = u.box.index(i1, i2, i3);
                    const std::size_t b = u.box.index(j[0], j[1], j[2]);
                    double m2 = 0.0;
                    for (int d = 0; d < 3; ++d) {
                        const double du = u.v[d][b] - u.v[d][a];
                        m2 += du * du;
                    }
                    out.values[a] += m2 / 3.0;
                }
    const double mean = std::accumulate(out.values.begin(), out.values.end(), 0.0) / double(out.values.size());
    if (!(mean > 0.0)) {
        std::fill(out.values.begin(), out.values.end(), 1.0);
        out.degenerate = true;
        out.max_value = 1.0;
        return out;
    }
    for (auto& v : out.values) v /= mean;
    out.max_value = *std::max_element(out.values.begin(), out.values.end());
    return out;
}

ExceptionalSet exceptional_set(const RealCube& grad_mag, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("exceptional_set: threshold must be > 0");
    ExceptionalSet out;
    out.mask.resize(grad_mag.size());
    std::size_t count = 0;
    for (std::size_t i = 0; i < grad_mag.size(); ++i) {
        out.mask[i] = grad_mag[i] > threshold ? 1 : 0;
        count += out.mask[i];
    }
    out.measure_fraction = grad_mag.empty() ? 0.0 : double(count) / double(grad_mag.size());
    return out;
}

double kappa_eps(double eps_frac, double delta) {
    if (!(eps_frac > 0.0 && eps_frac < 1.0)) throw std::invalid_argument("kappa_eps: eps must lie in (0, 1)");
    if (!(delta > 0.0)) throw std::invalid_argument("kappa_eps: delta must be > 0");
    const double l = std::log(1.0 / eps_frac);
    return delta / (1.0 + delta) * l / (1.0 + l);
}

TailFit tail_fit(std::span<const double> samples, double delta) {
    if (samples.size() < 100)
        throw InsufficientSamplesError("tail_fit: need at least 100 samples, got " + std::to_string(samples.size()));
    std::vector<double> v(samples.begin(), samples.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    const std::size_t first = n - std::max<std::size_t>(n / 10, 2);
    const double expo = 1.0 / (1.0 + delta);

    std::vector<double> x, y;
    for (std::size_t i = first; i < n; ++i) {
        // Survival estimate P(X > x_(i)) ~ (n - i) / (n + 1), strictly positive.
        x.push_back(std::copysign(std::pow(std::abs(v[i]), expo), v[i]));
        y.push_back(std::log(double(n - i) / double(n + 1)));
    }
    TailFit out;
    out.points_used = static_cast<int>(x.size());
    const double m = double(x.size());
    const double sx = std::accumulate(x.begin(), x.end(), 0.0), sy = std::accumulate(y.begin(), y.end(), 0.0);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = m * sxx - sx * sx;
    if (!(denom > 1e-12 * m * sxx) || v.front() == v.back()) {
        out.degenerate = true;
        return out;
    }
    const double slope = (m * sxy - sx * sy) / denom;
    const double icpt = (sy - slope * sx) / m;
    out.c_rate = -slope;
    out.c = std::exp(icpt);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - icpt - slope * x[i];
        acc += r * r;
    }
    out.residual = std::sqrt(acc / m);
    return out;
}

}  // namespace fracns
