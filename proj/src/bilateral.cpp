#include "refrule/bilateral.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "refrule/rng.hpp"
#include "refrule/summation.hpp"

namespace refrule {

namespace {

void require_unit(double x, const char* who) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error(std::string(who) + ": must lie in [0,1]");
}

double monopsony_utility(double v, double reference) {
    // max over bids below R of (v - b) b; the cap binds when v/2 >= R
    if (0.5 * v < reference) return 0.25 * v * v;
    return (v - reference) * reference;
}

double monopsony_bid(double v, double reference) {
    return 0.5 * v < reference ? 0.5 * v : reference;
}

double price_taking_utility(double v, double reference) {
    // bid the value: pay R against asks below R, the ask above it
    double margin = v - reference;
    return margin * reference + 0.5 * margin * margin;
}

}  // namespace

TradePrice trade_price(double ask, double bid, double reference) {
    if (ask > bid) return {false, 0.0};
    double p = std::min(std::max(reference, ask), bid);
    return {true, p};
}

BuyerBestResponse best_response(double v, double reference) {
    require_unit(v, "best_response: v");
    require_unit(reference, "best_response: reference");
    BuyerBestResponse reply;
    double um = monopsony_utility(v, reference);
    if (v < reference) {
        reply.regime = BuyerRegime::Monopsony;
        reply.bid = monopsony_bid(v, reference);
        reply.utility = um;
        return reply;
    }
    double us = price_taking_utility(v, reference);
    if (us >= um) {
        reply.regime = BuyerRegime::PriceTaking;
        reply.bid = v;
        reply.utility = us;
    } else {
        reply.regime = BuyerRegime::Monopsony;
        reply.bid = monopsony_bid(v, reference);
        reply.utility = um;
    }
    return reply;
}

BuyerThreshold buyer_threshold(double reference) {
    require_unit(reference, "buyer_threshold: reference");
    auto gap = [reference](double v) {
        return price_taking_utility(v, reference) - monopsony_utility(v, reference);
    };
    BuyerThreshold result;
    if (gap(1.0) < 0.0) {
        result.value = 1.0;
        result.switches = false;
        return result;
    }
    double lo = reference, hi = 1.0;
    if (gap(lo) >= 0.0) {
        result.value = lo;
        result.switches = true;
        return result;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    // the upper end keeps the threshold inside the price-taking branch
    result.value = hi;
    result.switches = true;
    return result;
}

PoolingStrategies pooling_strategies(double reference) {
    require_unit(reference, "pooling_strategies: reference");
    PoolingStrategies s;
    s.bid_accepting = reference;
    s.bid_rejecting = 0.0;
    s.ask_accepting = reference;
    s.ask_rejecting = 1.0;
    s.trade_probability = (1.0 - reference) * reference;
    return s;
}

namespace {

WelfareRow finish(double exact, const std::vector<double>& values) {
    std::size_t n = values.size();
    WelfareRow row;
    row.exact = exact;
    row.mc = pairwise_sum(values.data(), n) / static_cast<double>(n);
    double mu = row.mc;
    double ss = pairwise_sum(values.data(), 0, n, [mu](double x) { return (x - mu) * (x - mu); });
    row.mc_std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    return row;
}

}  // namespace

WelfareTable welfare(double reference, long n_samples, std::uint64_t seed) {
    require_unit(reference, "welfare: reference");
    if (n_samples < 2) throw std::invalid_argument("welfare: n_samples must be >= 2");
    std::size_t n = static_cast<std::size_t>(n_samples);
    std::vector<double> fb(n), lin(n), post(n), pool(n);
    Rng rng = Rng::stream(seed, 0);
    PoolingStrategies strat = pooling_strategies(reference);
    for (std::size_t i = 0; i < n; ++i) {
        double v = rng.uniform01();
        double c = rng.uniform01();
        double gain = v - c;
        fb[i] = gain > 0.0 ? gain : 0.0;
        // linear-strategy double auction: trade iff the quotes cross
        double bid = 2.0 * v / 3.0 + 1.0 / 12.0;
        double ask = 2.0 * c / 3.0 + 0.25;
        lin[i] = bid >= ask ? gain : 0.0;
        post[i] = (v >= reference && c <= reference) ? gain : 0.0;
        double pbid = v >= reference ? strat.bid_accepting : strat.bid_rejecting;
        double pask = c <= reference ? strat.ask_accepting : strat.ask_rejecting;
        pool[i] = pbid >= pask ? gain : 0.0;
    }
    WelfareTable table;
    table.first_best = finish(1.0 / 6.0, fb);
    table.linear_equilibrium = finish(9.0 / 64.0, lin);
    double posted_exact = reference * (1.0 - reference) / 2.0;
    table.posted_price = finish(posted_exact, post);
    table.pooling = finish(posted_exact, pool);
    return table;
}

double optimal_posted_price(const std::function<double(double)>& buyer_cdf,
                            const std::function<double(double)>& seller_cdf) {
    auto imbalance = [&](double r) { return (1.0 - buyer_cdf(r)) - seller_cdf(r); };
    double lo = 0.0, hi = 1.0;
    if (imbalance(lo) <= 0.0) return lo;
    if (imbalance(hi) >= 0.0) return hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (imbalance(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double optimal_posted_price() {
    return optimal_posted_price([](double x) { return x; }, [](double x) { return x; });
}

std::vector<PriceRow> simulate_prices(long periods, double reference, std::uint64_t seed) {
    require_unit(reference, "simulate_prices: reference");
    if (periods < 1) throw std::invalid_argument("simulate_prices: periods must be >= 1");
    std::vector<PriceRow> rows(static_cast<std::size_t>(periods));
    Rng rng = Rng::stream(seed, 0);
    PoolingStrategies strat = pooling_strategies(reference);
    for (long t = 0; t < periods; ++t) {
        auto& row = rows[static_cast<std::size_t>(t)];
        row.t = t + 1;
        row.v = rng.uniform01();
        row.c = rng.uniform01();
        double bid = 2.0 * row.v / 3.0 + 1.0 / 12.0;
        double ask = 2.0 * row.c / 3.0 + 0.25;
        if (bid >= ask) row.linear_da_price = 0.5 * (bid + ask);
        double pbid = row.v >= reference ? strat.bid_accepting : strat.bid_rejecting;
        double pask = row.c <= reference ? strat.ask_accepting : strat.ask_rejecting;
        TradePrice pooled = trade_price(pask, pbid, reference);
        if (pooled.trades) row.pooling_price = pooled.price;
    }
    return rows;
}

double linear_da_trade_frequency() { return 9.0 / 32.0; }

}  // namespace refrule
