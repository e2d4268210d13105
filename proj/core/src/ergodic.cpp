#include "af/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "af/errors.hpp"
#include "af/io.hpp"

namespace af {

namespace {

constexpr double kEscape = 1e6;

bool escaped(Vec2 z) {
    return !std::isfinite(z.x) || !std::isfinite(z.y) || std::abs(z.x) > kEscape ||
           std::abs(z.y) > kEscape;
}

Vec2 settle(const MapFamily& m, Vec2 z0, std::size_t burn_in) {
    Vec2 z = z0;
    for (std::size_t i = 0; i < burn_in; ++i) {
        z = m.eval(z);
        if (escaped(z)) throw OrbitEscape{i + 1};
    }
    return z;
}

} // namespace

LyapunovResult lyapunov_exponent(const MapFamily& m, Vec2 z0, std::size_t n,
                                 std::size_t burn_in) {
    LyapunovResult r;
    Vec2 z = settle(m, z0, burn_in);
    Vec2 v{1.0, 0.0};
    double sum_log = 0.0;
    double sum_log_det = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Mat2 J = m.jacobian(z);
        sum_log_det += std::log(std::abs(J.det()));
        v = J * v;
        const double s = v.norm();
        if (s < 1e-300)
            throw Error("tangent vector annihilated at step " + std::to_string(i));
        v = v * (1.0 / s);
        sum_log += std::log(s);
        z = m.eval(z);
        if (escaped(z)) throw OrbitEscape{burn_in + i + 1};
    }
    r.n_used = n;
    r.z_end = z;
    if (n > 0) {
        r.lambda1 = sum_log / static_cast<double>(n);
        r.mean_log_det = sum_log_det / static_cast<double>(n);
        r.lambda2 = r.mean_log_det - r.lambda1;
    }
    return r;
}

double birkhoff_average(const MapFamily& m, const Observable& phi, Vec2 z0,
                        std::size_t n, std::size_t burn_in) {
    if (n == 0) return 0.0;
    Vec2 z = settle(m, z0, burn_in);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += phi(z);
        z = m.eval(z);
        if (escaped(z)) throw OrbitEscape{burn_in + i + 1};
    }
    return sum / static_cast<double>(n);
}

double SRBHistogram::total_mass() const {
    double s = 0.0;
    for (double v : mass) s += v;
    return s;
}

std::vector<double> SRBHistogram::x_marginal() const {
    std::vector<double> out(nx, 0.0);
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix) out[ix] += mass[iy * nx + ix];
    return out;
}

namespace {

struct Binner {
    Box box;
    std::size_t nx, ny;
    std::vector<double>* mass;
    double* dropped;

    void add(Vec2 z, double w) const {
        if (!std::isfinite(z.x) || !std::isfinite(z.y) || !box.contains(z)) {
            *dropped += w;
            return;
        }
        std::size_t ix = static_cast<std::size_t>((z.x - box.xlo) / box.width() *
                                                  static_cast<double>(nx));
        std::size_t iy =
            box.height() > 0.0
                ? static_cast<std::size_t>((z.y - box.ylo) / box.height() *
                                           static_cast<double>(ny))
                : 0;
        if (ix >= nx) ix = nx - 1;
        if (iy >= ny) iy = ny - 1;
        (*mass)[iy * nx + ix] += w;
    }
};

SRBHistogram make_histogram(const MapFamily& m, const HistogramGrid& grid,
                            HistogramSource src) {
    SRBHistogram h;
    h.box = grid.box ? *grid.box
                     : (m.trapping_box ? *m.trapping_box : m.working_box);
    h.nx = std::max<std::size_t>(1, grid.nx);
    h.ny = std::max<std::size_t>(1, grid.ny);
    h.mass.assign(h.nx * h.ny, 0.0);
    h.source = src;
    return h;
}

} // namespace

SRBHistogram srb_pushforward(const MapFamily& m, const SampledCurve& segment,
                             std::size_t n_steps, std::size_t n_particles,
                             const HistogramGrid& grid, std::size_t threads) {
    SRBHistogram h = make_histogram(m, grid, HistogramSource::pushforward);
    if (segment.points.size() < 2 || n_particles == 0) {
        h.dropped_fraction = 1.0;
        h.mass_loss_warning = true;
        return h;
    }

    // equal-arclength particles along the polyline
    std::vector<double> cum(segment.points.size(), 0.0);
    for (std::size_t i = 1; i < segment.points.size(); ++i)
        cum[i] = cum[i - 1] + distance(segment.points[i - 1], segment.points[i]);
    const double total = cum.back();
    if (total <= 0.0) {
        h.dropped_fraction = 1.0;
        h.mass_loss_warning = true;
        return h;
    }
    std::vector<Vec2> pts;
    pts.reserve(n_particles);
    std::size_t seg_i = 1;
    for (std::size_t j = 0; j < n_particles; ++j) {
        const double s = total * (static_cast<double>(j) + 0.5) /
                         static_cast<double>(n_particles);
        while (seg_i + 1 < cum.size() && cum[seg_i] < s) ++seg_i;
        const double lo = cum[seg_i - 1], hi = cum[seg_i];
        const double f = hi > lo ? (s - lo) / (hi - lo) : 0.0;
        const Vec2 a = segment.points[seg_i - 1], b = segment.points[seg_i];
        pts.push_back({a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)});
    }

    const auto run_block = [&](std::size_t j0, std::size_t j1,
                               std::vector<double>& mass, double& dropped) {
        Binner bin{h.box, h.nx, h.ny, &mass, &dropped};
        if (n_steps == 0) {
            const double w = 1.0 / static_cast<double>(n_particles);
            for (std::size_t j = j0; j < j1; ++j) bin.add(pts[j], w);
            return;
        }
        const double w =
            1.0 / (static_cast<double>(n_particles) * static_cast<double>(n_steps));
        for (std::size_t j = j0; j < j1; ++j) {
            Vec2 z = pts[j];
            for (std::size_t step = 1; step <= n_steps; ++step) {
                z = m.eval(z);
                if (escaped(z)) {
                    // this particle's remaining share of the average is lost
                    dropped += w * static_cast<double>(n_steps - step + 1);
                    break;
                }
                bin.add(z, w);
            }
        }
    };

    const std::size_t nt =
        std::max<std::size_t>(1, std::min(threads, n_particles));
    if (nt <= 1) {
        run_block(0, n_particles, h.mass, h.dropped_fraction);
    } else {
        std::vector<std::vector<double>> mass(nt);
        std::vector<double> dropped(nt, 0.0);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        const std::size_t chunk = (n_particles + nt - 1) / nt;
        for (std::size_t t = 0; t < nt; ++t)
            pool.emplace_back([&, t]() {
                mass[t].assign(h.nx * h.ny, 0.0);
                run_block(t * chunk, std::min(n_particles, (t + 1) * chunk),
                          mass[t], dropped[t]);
            });
        for (std::thread& th : pool) th.join();
        for (std::size_t t = 0; t < nt; ++t) {
            h.dropped_fraction += dropped[t];
            for (std::size_t i = 0; i < h.mass.size(); ++i) h.mass[i] += mass[t][i];
        }
    }
    h.mass_loss_warning = h.dropped_fraction > 1e-3;
    return h;
}

SRBHistogram srb_birkhoff(const MapFamily& m, Vec2 z0, std::size_t n,
                          std::size_t burn_in, const HistogramGrid& grid) {
    SRBHistogram h = make_histogram(m, grid, HistogramSource::birkhoff);
    if (n == 0) return h;
    Binner bin{h.box, h.nx, h.ny, &h.mass, &h.dropped_fraction};
    Vec2 z = settle(m, z0, burn_in);
    const double w = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        bin.add(z, w);
        z = m.eval(z);
        if (escaped(z)) throw OrbitEscape{burn_in + i + 1};
    }
    h.mass_loss_warning = h.dropped_fraction > 1e-3;
    return h;
}

double total_variation_x(const SRBHistogram& A, const SRBHistogram& B) {
    if (A.nx != B.nx) throw Error("total_variation_x: histograms differ in nx");
    std::vector<double> a = A.x_marginal(), b = B.x_marginal();
    double sa = 0.0, sb = 0.0;
    for (double v : a) sa += v;
    for (double v : b) sb += v;
    if (sa <= 0.0 || sb <= 0.0) return 1.0;
    double tv = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        tv += std::abs(a[i] / sa - b[i] / sb);
    return 0.5 * tv;
}

CorrelationFit correlation_fit(const MapFamily& m, const Observable& phi,
                               const Observable& psi, Vec2 z0,
                               std::size_t n_samples, std::size_t lag_max,
                               std::size_t burn_in) {
    if (n_samples <= lag_max + 1)
        throw Error("correlation_fit: n_samples must exceed lag_max + 1");
    CorrelationFit cf;
    Vec2 z = settle(m, z0, burn_in);
    std::vector<double> f(n_samples), g(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        f[i] = phi(z);
        g[i] = psi(z);
        z = m.eval(z);
        if (escaped(z)) throw OrbitEscape{burn_in + i + 1};
    }
    double mf = 0.0, mg = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        mf += f[i];
        mg += g[i];
    }
    mf /= static_cast<double>(n_samples);
    mg /= static_cast<double>(n_samples);
    double vf = 0.0, vg = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        vf += (f[i] - mf) * (f[i] - mf);
        vg += (g[i] - mg) * (g[i] - mg);
    }
    vf /= static_cast<double>(n_samples);
    vg /= static_cast<double>(n_samples);

    for (std::size_t lag = 0; lag <= lag_max; ++lag) {
        double c = 0.0;
        const std::size_t cnt = n_samples - lag;
        for (std::size_t i = 0; i < cnt; ++i)
            c += (f[i + lag] - mf) * (g[i] - mg);
        cf.lags.push_back(lag);
        cf.C.push_back(c / static_cast<double>(cnt));
    }

    cf.noise_floor = 5.0 * std::sqrt(std::max(vf, 0.0) * std::max(vg, 0.0)) /
                     std::sqrt(static_cast<double>(n_samples));
    cf.fitted.assign(cf.C.size(), std::numeric_limits<double>::quiet_NaN());

    // inverse-variance weights on log|C|: relative noise is floor/|C|
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t lag = 1; lag <= lag_max; ++lag) {
        const double ac = std::abs(cf.C[lag]);
        if (ac <= cf.noise_floor || cf.noise_floor <= 0.0) continue;
        ++cf.n_fitted;
        const double x = static_cast<double>(lag);
        const double y = std::log(ac);
        double w = (ac / cf.noise_floor) * (ac / cf.noise_floor);
        w = std::min(w, 1e12);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    cf.all_below_floor = cf.n_fitted == 0;
    if (cf.n_fitted >= 2) {
        const double denom = sw * sxx - sx * sx;
        if (denom > 0.0) {
            const double slope = (sw * sxy - sx * sy) / denom;
            const double icept = (sy - slope * sx) / sw;
            cf.lambda_fit = std::min(std::exp(slope), 1.0);
            cf.K_fit = std::exp(icept);
            // weighted r^2 over the fitted lags
            const double ybar = sy / sw;
            double ss_res = 0.0, ss_tot = 0.0;
            for (std::size_t lag = 1; lag <= lag_max; ++lag) {
                const double ac = std::abs(cf.C[lag]);
                if (ac <= cf.noise_floor) continue;
                double w = (ac / cf.noise_floor) * (ac / cf.noise_floor);
                w = std::min(w, 1e12);
                const double y = std::log(ac);
                const double yh =
                    icept + slope * static_cast<double>(lag);
                ss_res += w * (y - yh) * (y - yh);
                ss_tot += w * (y - ybar) * (y - ybar);
            }
            cf.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
            for (std::size_t lag = 0; lag <= lag_max; ++lag)
                cf.fitted[lag] =
                    cf.K_fit * std::pow(cf.lambda_fit, static_cast<double>(lag));
        }
    }
    return cf;
}

void write_histogram_csv(const SRBHistogram& h, const std::string& path) {
    std::string out = "bin_x,bin_y,mass\n";
    for (std::size_t iy = 0; iy < h.ny; ++iy)
        for (std::size_t ix = 0; ix < h.nx; ++ix) {
            const double v = h.mass[iy * h.nx + ix];
            if (v <= 0.0) continue;
            const double cx =
                h.box.xlo + h.box.width() * (static_cast<double>(ix) + 0.5) /
                                static_cast<double>(h.nx);
            const double cy =
                h.box.ylo + h.box.height() * (static_cast<double>(iy) + 0.5) /
                                static_cast<double>(h.ny);
            out += io::csv_row({io::fmt_g17(cx), io::fmt_g17(cy), io::fmt_g17(v)});
        }
    io::write_text_file(path, out);
}

void write_correlation_csv(const CorrelationFit& f, const std::string& path) {
    std::string out = "lag,C,fitted\n";
    for (std::size_t i = 0; i < f.lags.size(); ++i)
        out += io::csv_row({io::fmt_u(f.lags[i]), io::fmt_g17(f.C[i]),
                            io::fmt_g17(f.fitted[i])});
    io::write_text_file(path, out);
}

} // namespace af
