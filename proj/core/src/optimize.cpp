#include "faircsb/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "faircsb/rng.hpp"

namespace faircsb {

void ConfidenceRegion::validate() const {
    if (lower.empty() || lower.size() != upper.size())
        throw std::invalid_argument("ConfidenceRegion: bound sizes mismatch or empty");
    for (std::size_t a = 0; a < lower.size(); ++a) {
        if (!(lower[a] >= 0.0) || !(upper[a] <= 1.0) || lower[a] > upper[a])
            throw std::invalid_argument("ConfidenceRegion: need 0 <= lower <= upper <= 1");
    }
}

double fair_reward_objective(const MeritFunction& f, std::span<const double> mu, int subset_size) {
    double sum_f = 0.0, sum_fm = 0.0;
    for (double m : mu) {
        const double fv = f(m);
        sum_f += fv;
        sum_fm += fv * m;
    }
    if (!(sum_f > 0.0)) return 0.0;
    return static_cast<double>(subset_size) * sum_fm / sum_f;
}

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;  // (sqrt(5)-1)/2

// 1-D slice of the objective at coordinate a with the other arms' merit sums
// held fixed: h(t) = L (s_fm + f(t) t) / (s_f + f(t)).
struct Slice {
    const MeritFunction& f;
    double s_fm, s_f, scale;
    double operator()(double t) const {
        const double fv = f(t);
        const double denom = s_f + fv;
        if (!(denom > 0.0)) return 0.0;
        return scale * (s_fm + fv * t) / denom;
    }
};

// Maximizes h over [lo, hi]: coarse bracket scan, then golden-section inside
// the best bracket. Returns the best point evaluated.
double maximize_slice(const Slice& h, double lo, double hi, const SolverOptions& opts) {
    if (hi - lo < 1e-14) return lo;

    const int n = std::max(3, opts.bracket_points);
    double best_t = lo, best_v = h(lo);
    int best_i = 0;
    for (int i = 1; i < n; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        const double v = h(t);
        if (v > best_v) {
            best_v = v;
            best_t = t;
            best_i = i;
        }
    }

    double a = lo + (hi - lo) * static_cast<double>(std::max(0, best_i - 1)) / (n - 1);
    double b = lo + (hi - lo) * static_cast<double>(std::min(n - 1, best_i + 1)) / (n - 1);
    double x1 = b - kGoldenRatio * (b - a);
    double x2 = a + kGoldenRatio * (b - a);
    double v1 = h(x1), v2 = h(x2);
    while (b - a > opts.line_tol) {
        if (v1 >= v2) {
            b = x2;
            x2 = x1;
            v2 = v1;
            x1 = b - kGoldenRatio * (b - a);
            v1 = h(x1);
        } else {
            a = x1;
            x1 = x2;
            v1 = v2;
            x2 = a + kGoldenRatio * (b - a);
            v2 = h(x2);
        }
    }
    const double mid = 0.5 * (a + b);
    const double vm = h(mid);
    if (vm > best_v) {
        best_v = vm;
        best_t = mid;
    }
    if (v1 > best_v) {
        best_v = v1;
        best_t = x1;
    }
    if (v2 > best_v) {
        best_t = x2;
    }
    return best_t;
}

struct AscentResult {
    std::vector<double> point;
    double value;
};

AscentResult coordinate_ascent(const MeritFunction& f, const ConfidenceRegion& region,
                               int subset_size, std::vector<double> x, const SolverOptions& opts) {
    const std::size_t num_arms = x.size();
    std::vector<double> fv(num_arms), fm(num_arms);
    double value = fair_reward_objective(f, x, subset_size);

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        double sum_f = 0.0, sum_fm = 0.0;
        for (std::size_t a = 0; a < num_arms; ++a) {
            fv[a] = f(x[a]);
            fm[a] = fv[a] * x[a];
            sum_f += fv[a];
            sum_fm += fm[a];
        }
        const double before = value;
        for (std::size_t a = 0; a < num_arms; ++a) {
            const Slice h{f, sum_fm - fm[a], sum_f - fv[a], static_cast<double>(subset_size)};
            const double cur_v = h(x[a]);
            const double t = maximize_slice(h, region.lower[a], region.upper[a], opts);
            if (h(t) > cur_v) {
                x[a] = t;
                const double nfv = f(t);
                sum_f += nfv - fv[a];
                sum_fm += nfv * t - fm[a];
                fv[a] = nfv;
                fm[a] = nfv * t;
            }
        }
        value = fair_reward_objective(f, x, subset_size);
        if (value - before < opts.sweep_tol) break;
    }
    return {std::move(x), value};
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

}  // namespace

std::vector<double> maximize_over_region(const MeritFunction& f, const ConfidenceRegion& region,
                                         int subset_size, const SolverOptions& opts) {
    region.validate();
    const std::size_t num_arms = region.lower.size();
    if (subset_size < 1 || static_cast<std::size_t>(subset_size) > num_arms)
        throw std::invalid_argument("maximize_over_region: need 1 <= L <= K");

    std::vector<std::vector<double>> starts;
    starts.push_back(region.lower);
    starts.push_back(region.upper);
    std::vector<double> mid(num_arms);
    for (std::size_t a = 0; a < num_arms; ++a) mid[a] = 0.5 * (region.lower[a] + region.upper[a]);
    starts.push_back(std::move(mid));
    Rng rng(opts.seed);
    for (int s = 0; s < opts.random_starts; ++s) {
        std::vector<double> pt(num_arms);
        for (std::size_t a = 0; a < num_arms; ++a)
            pt[a] = region.lower[a] + rng.uniform01() * (region.upper[a] - region.lower[a]);
        starts.push_back(std::move(pt));
    }

    AscentResult best{std::vector<double>(), -1.0};
    for (auto& start : starts) {
        AscentResult r = coordinate_ascent(f, region, subset_size, std::move(start), opts);
        if (r.value > best.value || (r.value == best.value && lex_less(r.point, best.point)))
            best = std::move(r);
    }

    for (std::size_t a = 0; a < num_arms; ++a)
        best.point[a] = std::clamp(best.point[a], region.lower[a], region.upper[a]);
    return std::move(best.point);
}

std::vector<double> grid_oracle(const MeritFunction& f, const ConfidenceRegion& region,
                                int subset_size, double step) {
    region.validate();
    const int num_arms = region.num_arms();
    if (num_arms > 4) throw std::invalid_argument("grid_oracle: K must be <= 4");
    if (step < 1e-3) throw std::invalid_argument("grid_oracle: step must be >= 1e-3");

    // Per-axis grid values with precomputed f and f*mu tables.
    struct Axis {
        std::vector<double> value, fv, fm;
    };
    std::vector<Axis> axes(static_cast<std::size_t>(num_arms));
    for (int a = 0; a < num_arms; ++a) {
        Axis& ax = axes[static_cast<std::size_t>(a)];
        const double lo = region.lower[static_cast<std::size_t>(a)];
        const double hi = region.upper[static_cast<std::size_t>(a)];
        for (double v = lo; v < hi - 1e-12; v += step) ax.value.push_back(v);
        ax.value.push_back(hi);
        ax.fv.resize(ax.value.size());
        ax.fm.resize(ax.value.size());
        for (std::size_t i = 0; i < ax.value.size(); ++i) {
            ax.fv[i] = f(ax.value[i]);
            ax.fm[i] = ax.fv[i] * ax.value[i];
        }
    }

    double best_obj = -1.0;
    std::array<std::size_t, 4> best_idx{}, path{};
    const double scale = static_cast<double>(subset_size);

    // Lexicographic iteration with hoisted partial sums; strict improvement
    // keeps the lexicographically smallest argmax.
    auto walk = [&](auto&& self, int axis, double s_fm, double s_f) -> void {
        const Axis& ax = axes[static_cast<std::size_t>(axis)];
        if (axis == num_arms - 1) {
            for (std::size_t i = 0; i < ax.value.size(); ++i) {
                const double denom = s_f + ax.fv[i];
                const double obj = denom > 0.0 ? scale * (s_fm + ax.fm[i]) / denom : 0.0;
                if (obj > best_obj) {
                    best_obj = obj;
                    path[static_cast<std::size_t>(axis)] = i;
                    best_idx = path;
                }
            }
            return;
        }
        for (std::size_t i = 0; i < ax.value.size(); ++i) {
            path[static_cast<std::size_t>(axis)] = i;
            self(self, axis + 1, s_fm + ax.fm[i], s_f + ax.fv[i]);
        }
    };
    walk(walk, 0, 0.0, 0.0);

    std::vector<double> result(static_cast<std::size_t>(num_arms));
    for (int a = 0; a < num_arms; ++a)
        result[static_cast<std::size_t>(a)] = axes[static_cast<std::size_t>(a)].value[best_idx[static_cast<std::size_t>(a)]];
    return result;
}

}  // namespace faircsb
