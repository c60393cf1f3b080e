#include "carousel/simulator.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace carousel {

Rng::Rng(std::uint64_t base_seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

namespace {

void fill_order(Rng& rng, int m, OrderRealization& order)
{
    if (m < 1) {
        throw std::domain_error("generate_order: order size must be >= 1");
    }
    order.positions.resize(static_cast<std::size_t>(m));
    for (double& u : order.positions) {
        u = rng.uniform();
    }
    std::sort(order.positions.begin(), order.positions.end());
}

}  // namespace

OrderRealization generate_order(Rng& rng, int m)
{
    OrderRealization order;
    fill_order(rng, m, order);
    return order;
}

namespace {

// Shorter rotation from the origin to position u.
double reach(double u) noexcept
{
    return std::min(u, 1.0 - u);
}

// Gap i runs from item i to item (i + 1) mod m in the rotation direction.
double gap(std::span<const double> u, std::size_t i) noexcept
{
    const std::size_t m = u.size();
    return i + 1 < m ? u[i + 1] - u[i] : 1.0 - u[m - 1] + u[0];
}

std::size_t largest_gap(std::span<const double> u) noexcept
{
    std::size_t best = 0;
    double best_len = gap(u, 0);
    for (std::size_t i = 1; i < u.size(); ++i) {
        const double g = gap(u, i);
        if (g > best_len) {  // ties keep the lower start index
            best = i;
            best_len = g;
        }
    }
    return best;
}

double gap_endpoint_reach(std::span<const double> u, std::size_t i) noexcept
{
    return std::min(reach(u[i]), reach(u[(i + 1) % u.size()]));
}

// Travel after picking the first item u[0] (forward first) or u[m-1]
// (backward first), choosing the shorter single direction for the rest.
double shortest_after_first(std::span<const double> u, bool from_first) noexcept
{
    const std::size_t m = u.size();
    if (m == 1) {
        return 0.0;
    }
    const double sweep = u[m - 1] - u[0];
    if (from_first) {
        return std::min(sweep, u[0] + 1.0 - u[1]);
    }
    return std::min(sweep, 1.0 - u[m - 1] + u[m - 2]);
}

}  // namespace

PrepTravel prep_and_travel(StrategyId strategy, const OrderRealization& order, double budget)
{
    const std::span<const double> u = order.positions;
    const std::size_t m = u.size();
    if (m == 0) {
        throw std::domain_error("prep_and_travel: empty order");
    }
    const double first = u[0];
    const double last = u[m - 1];
    const bool first_is_nearer = first <= 1.0 - last;

    switch (strategy) {
    case StrategyId::UniNearest:
        return {first, last - first};

    case StrategyId::UniAfterGap: {
        const std::size_t j = largest_gap(u);
        return {u[(j + 1) % m], 1.0 - gap(u, j)};
    }

    case StrategyId::BiNearestSameDir:
        return {std::min(first, 1.0 - last), last - first};

    case StrategyId::BiNearestShortest:
        return {std::min(first, 1.0 - last), shortest_after_first(u, first_is_nearer)};

    case StrategyId::BiAvoidGap: {
        const std::size_t j = largest_gap(u);
        return {gap_endpoint_reach(u, j), 1.0 - gap(u, j)};
    }

    case StrategyId::BiSecondItem: {
        if (m == 1) {
            return {reach(first), 0.0};
        }
        const bool forward = u[1] <= 1.0 - u[m - 2];
        return {forward ? first : 1.0 - last, shortest_after_first(u, forward)};
    }

    case StrategyId::BiGapFallback: {
        std::vector<std::size_t> idx(m);
        for (std::size_t i = 0; i < m; ++i) {
            idx[i] = i;
        }
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return gap(u, a) > gap(u, b); });
        for (std::size_t i : idx) {
            const double d = gap_endpoint_reach(u, i);
            if (d <= budget) {
                return {d, 1.0 - gap(u, i)};
            }
        }
        // Nothing reachable in time: the carousel still rotates during the
        // preparation phase, to the nearest item, then takes the shorter direction.
        return {std::min(first, 1.0 - last), shortest_after_first(u, first_is_nearer)};
    }
    }
    throw std::domain_error("prep_and_travel: unknown strategy");
}

void SimConfig::validate() const
{
    if (!(total_orders > warmup_orders) || warmup_orders < 0) {
        throw std::domain_error("SimConfig: need total_orders > warmup_orders >= 0");
    }
    if (replications < 1) {
        throw std::domain_error("SimConfig: replications must be >= 1");
    }
    if (cdf_grid_points < 3) {
        throw std::domain_error("SimConfig: cdf_grid_points must be >= 3");
    }
}

double t_quantile(double p, int dof)
{
    if (dof < 1) {
        throw std::domain_error("t_quantile: need at least one degree of freedom");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("t_quantile: p must be in (0, 1)");
    }
    const boost::math::students_t dist(static_cast<double>(dof));
    return boost::math::quantile(dist, p);
}

double t_quantile_975(int dof)
{
    return t_quantile(0.975, dof);
}

namespace {

// Every sojourn is at most B + A <= 2.
constexpr double kSojournCeiling = 2.0;

struct ReplicationOutput {
    ReplicationStats stats;
    // counts[i] = number of sojourns in (x_{i-1}, x_i] on the [0, 2] grid
    std::vector<std::int64_t> counts;
    std::vector<double> samples;
};

ReplicationOutput run_replication(const SimConfig& cfg, int replication, std::size_t bins)
{
    Rng rng(cfg.base_seed, static_cast<std::uint64_t>(replication));
    ReplicationOutput out;
    out.counts.assign(bins + 1, 0);
    if (cfg.keep_samples) {
        out.samples.reserve(static_cast<std::size_t>(cfg.total_orders - cfg.warmup_orders));
    }
    // bins on [0, 2] have the width of the [0, 1] cells
    const double inv_h = static_cast<double>(bins) / kSojournCeiling;

    OrderRealization order;
    double previous = 0.0;
    double total = 0.0;
    for (std::int64_t k = 0; k < cfg.total_orders; ++k) {
        const bool on_a = (k % 2) == 0;
        const auto& sizes = on_a ? cfg.orders_a : cfg.orders_b;
        const int m = sizes.draw(rng.uniform());
        fill_order(rng, m, order);
        const auto [prep, travel] = prep_and_travel(on_a ? cfg.strategy_a : cfg.strategy_b, order, previous);
        const double sojourn = std::max(prep - previous, 0.0) + travel;
        previous = sojourn;
        if (k < cfg.warmup_orders) {
            continue;
        }
        total += sojourn;
        ++out.stats.orders;
        out.stats.max_sojourn = std::max(out.stats.max_sojourn, sojourn);
        const auto bin = std::min(static_cast<std::size_t>(std::ceil(sojourn * inv_h)), bins);
        ++out.counts[bin];
        if (cfg.keep_samples) {
            out.samples.push_back(sojourn);
        }
    }
    out.stats.mean_sojourn = total / static_cast<double>(out.stats.orders);
    out.stats.throughput = static_cast<double>(out.stats.orders) / total;
    return out;
}

Estimate estimate(const std::vector<double>& values)
{
    Estimate e;
    const auto r = values.size();
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    e.value = sum / static_cast<double>(r);
    if (r >= 2) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - e.value) * (v - e.value);
        }
        const double sd = std::sqrt(ss / static_cast<double>(r - 1));
        e.half_width = t_quantile_975(static_cast<int>(r) - 1) * sd / std::sqrt(static_cast<double>(r));
    }
    return e;
}

}  // namespace

SimulationSummary run_simulation(const SimConfig& cfg)
{
    cfg.validate();
    const std::size_t cells = cfg.cdf_grid_points - 1;
    const std::size_t bins = 2 * cells;  // the [0, 2] grid refines [0, 1] node for node
    const auto reps = static_cast<std::size_t>(cfg.replications);

    std::vector<ReplicationOutput> outputs(reps);
    unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(reps));
    if (workers <= 1) {
        for (std::size_t r = 0; r < reps; ++r) {
            outputs[r] = run_replication(cfg, static_cast<int>(r), bins);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < reps; r = next++) {
                    outputs[r] = run_replication(cfg, static_cast<int>(r), bins);
                }
            });
        }
    }

    SimulationSummary summary{{}, {}, GridFunction::constant(1.0, 3, 0.0), 0.0, {}, {}};
    std::vector<std::int64_t> counts(bins + 1, 0);
    std::vector<double> means;
    std::vector<double> rates;
    std::int64_t pooled = 0;
    for (auto& out : outputs) {
        summary.replications.push_back(out.stats);
        means.push_back(out.stats.mean_sojourn);
        rates.push_back(out.stats.throughput);
        summary.max_sojourn = std::max(summary.max_sojourn, out.stats.max_sojourn);
        pooled += out.stats.orders;
        for (std::size_t i = 0; i <= bins; ++i) {
            counts[i] += out.counts[i];
        }
        if (cfg.keep_samples) {
            summary.samples.insert(summary.samples.end(), out.samples.begin(), out.samples.end());
            out.samples = {};
        }
    }
    summary.mean_sojourn = estimate(means);
    summary.throughput = estimate(rates);

    const bool wide = summary.max_sojourn > 1.0;
    const std::size_t nodes = (wide ? bins : cells) + 1;
    std::vector<double> cdf(nodes);
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < nodes; ++i) {
        acc += counts[i];
        cdf[i] = static_cast<double>(acc) / static_cast<double>(pooled);
    }
    summary.empirical_cdf = GridFunction(wide ? kSojournCeiling : 1.0, std::move(cdf));
    if (cfg.keep_samples) {
        std::sort(summary.samples.begin(), summary.samples.end());
    }
    return summary;
}

double ks_distance(std::span<const double> sorted_samples, const std::function<double(double)>& cdf)
{
    const auto n = static_cast<double>(sorted_samples.size());
    if (sorted_samples.empty()) {
        throw std::domain_error("ks_distance: no samples");
    }
    double d = 0.0;
    std::size_t i = 0;
    while (i < sorted_samples.size()) {
        const double v = sorted_samples[i];
        std::size_t j = i;
        while (j < sorted_samples.size() && sorted_samples[j] == v) {
            ++j;
        }
        const double f = cdf(v);
        const double f_left = v > 0.0 ? f : 0.0;
        d = std::max(d, std::abs(static_cast<double>(j) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f_left));
        i = j;
    }
    return d;
}

}  // namespace carousel
