#include "goalforge/evalmetrics.hpp"

#include "goalforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

namespace gf {

PMF PMF::uniform(std::size_t n) {
    if (n == 0) throw Error(errc::bad_config, "uniform PMF needs support size >= 1");
    PMF pmf;
    pmf.p.assign(n, 1.0 / static_cast<double>(n));
    return pmf;
}

PMF PMF::from_counts(const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    if (counts.empty() || total == 0) throw Error(errc::empty_counts, "counts sum to zero");
    PMF pmf;
    pmf.p.reserve(counts.size());
    for (std::uint64_t c : counts)
        pmf.p.push_back(static_cast<double>(c) / static_cast<double>(total));
    return pmf;
}

void PMF::validate() const {
    if (p.empty()) throw Error(errc::bad_config, "PMF support must be non-empty");
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0 || !std::isfinite(v))
            throw Error(errc::bad_config, "PMF entries must be finite and non-negative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error(errc::bad_config, "PMF must sum to 1");
}

double jsd(const PMF& p, const PMF& q) {
    p.validate();
    q.validate();
    if (p.p.size() != q.p.size())
        throw Error(errc::support_mismatch, "PMF supports differ in size");

    // 0 log 0 := 0; log base 2 bounds the divergence by 1
    auto kl_to_mix = [](const std::vector<double>& a, const std::vector<double>& b) {
        double kl = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] <= 0.0) continue;
            double m = 0.5 * (a[i] + b[i]);
            kl += a[i] * std::log2(a[i] / m);
        }
        return kl;
    };
    double d = 0.5 * kl_to_mix(p.p, q.p) + 0.5 * kl_to_mix(q.p, p.p);
    return std::clamp(d, 0.0, 1.0);
}

double diversity_score(const std::vector<std::uint64_t>& counts) {
    PMF p_hat = PMF::from_counts(counts);
    return 1.0 - jsd(p_hat, PMF::uniform(counts.size()));
}

AccuracyReport planning_accuracy(const std::vector<TrialLog>& logs) {
    AccuracyReport report;
    for (const TrialLog& log : logs) {
        if (!log.valid) continue;
        ++report.valid;
        if (log.observed && *log.observed == log.ground_truth) ++report.success;
    }
    if (report.valid == 0) throw Error(errc::no_valid_trials, "no valid trials to score");
    report.accuracy_percent = 100.0 * report.success / report.valid;
    return report;
}

CollisionDetection detect_collision_and_speed(const std::vector<Vec2>& projectile,
                                              const std::vector<Vec2>& target, double fps,
                                              double eps) {
    if (projectile.size() != target.size())
        throw Error(errc::bad_config, "trajectories must have equal length");
    if (projectile.size() < 3)
        throw Error(errc::bad_config, "trajectories must have at least 3 frames");
    if (fps <= 0.0 || eps <= 0.0) throw Error(errc::bad_config, "fps and eps must be positive");

    int collision = -1;
    for (std::size_t k = 1; k < target.size(); ++k) {
        double speed = (target[k] - target[k - 1]).norm() * fps;
        if (speed > eps) {
            collision = static_cast<int>(k);
            break;
        }
    }
    if (collision < 0)
        throw Error(errc::no_collision_detected, "target never exceeded the speed threshold");

    // average the steps strictly before the collision interval
    double sum = 0.0;
    int n = 0;
    for (int k = 1; k < collision; ++k) {
        sum += (projectile[k] - projectile[k - 1]).norm() * fps;
        ++n;
    }
    if (n == 0)
        throw Error(errc::no_collision_detected,
                    "collision in the first interval leaves no pre-collision window");
    return {collision, sum / n};
}

SpeedOrderingReport speed_ordering_check(const std::vector<SpeedTrial>& trials) {
    auto key = [](double m) { return std::llround(m * 1e6); };
    std::map<std::pair<long long, long long>, SpeedGroup> groups;
    for (const SpeedTrial& t : trials) {
        SpeedGroup& g = groups[{key(t.m_p), key(t.m_t)}];
        g.m_p = t.m_p;
        g.m_t = t.m_t;
        g.mean_speed += t.projectile_speed;
        ++g.count;
    }
    SpeedOrderingReport report;
    for (auto& [k, g] : groups) {
        g.mean_speed /= g.count;
        report.groups.push_back(g);
    }

    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string(buf);
    };
    auto label = [&](const SpeedGroup& g) {
        return "mp=" + num(g.m_p) + ",mt=" + num(g.m_t);
    };
    for (std::size_t i = 0; i < report.groups.size(); ++i) {
        for (std::size_t j = 0; j < report.groups.size(); ++j) {
            const SpeedGroup& a = report.groups[i];
            const SpeedGroup& b = report.groups[j];
            SpeedRelationship rel;
            if (key(a.m_p) == key(b.m_p) && a.m_t < b.m_t) {
                // heavier target needs the faster projectile
                rel = {label(a), label(b), a.mean_speed, b.mean_speed,
                       a.mean_speed < b.mean_speed};
            } else if (key(a.m_t) == key(b.m_t) && a.m_p > b.m_p) {
                // heavier projectile can move slower
                rel = {label(a), label(b), a.mean_speed, b.mean_speed,
                       a.mean_speed < b.mean_speed};
            } else {
                continue;
            }
            report.relationships.push_back(rel);
        }
    }
    if (report.relationships.empty())
        throw Error(errc::insufficient_groups, "no two mass groups share a fixed mass");
    report.all_satisfied =
        std::all_of(report.relationships.begin(), report.relationships.end(),
                    [](const SpeedRelationship& r) { return r.satisfied; });
    return report;
}

} // namespace gf
