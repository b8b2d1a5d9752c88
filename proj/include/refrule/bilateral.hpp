#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace refrule {

// Two-sided trade with valuations and costs uniform on [0,1] and a public
// reference price R. When a trade happens at ask s <= bid b, it executes at
// the projection of R onto [s, b]: the reference price when both sides
// accept it, otherwise the nearest quote.

struct TradePrice {
    bool trades = false;
    double price = 0.0;
};

TradePrice trade_price(double ask, double bid, double reference);

enum class BuyerRegime { Monopsony, PriceTaking };

struct BuyerBestResponse {
    double bid = 0.0;
    BuyerRegime regime = BuyerRegime::Monopsony;
    double utility = 0.0;
};

// Best reply of a buyer with value v against a sincere seller: shade the
// bid below R and extract margin, or bid the value and mostly pay R. Ties
// resolve to price taking.
BuyerBestResponse best_response(double v, double reference);

struct BuyerThreshold {
    double value = 1.0;
    bool switches = false;  // false: monopsony is best for every v <= 1
};

// The valuation at which the best reply switches from monopsony to price
// taking; utilities of the two regimes cross continuously there.
BuyerThreshold buyer_threshold(double reference);

struct PoolingStrategies {
    double bid_accepting = 0.0;  // bid of a buyer with v >= R
    double bid_rejecting = 0.0;
    double ask_accepting = 0.0;  // ask of a seller with c <= R
    double ask_rejecting = 0.0;
    double trade_probability = 0.0;
};

// Equilibrium in which both sides either quote R or refuse to trade; every
// executed trade has nonnegative surplus on both sides.
PoolingStrategies pooling_strategies(double reference);

struct WelfareRow {
    double exact = 0.0;
    double mc = 0.0;
    double mc_std_error = 0.0;
};

struct WelfareTable {
    WelfareRow first_best;          // all gains from trade: 1/6
    WelfareRow linear_equilibrium;  // linear-strategy double auction
    WelfareRow posted_price;        // trade iff v >= R >= c at price R
    WelfareRow pooling;             // same allocation, via the quote rules
};

WelfareTable welfare(double reference, long n_samples = 1000000, std::uint64_t seed = 42);

// Reference price maximizing posted-price welfare: the unique root of
// 1 - F(R) = G(R). Defaults to the uniform pair, where it is 1/2.
double optimal_posted_price(const std::function<double(double)>& buyer_cdf,
                            const std::function<double(double)>& seller_cdf);
double optimal_posted_price();

struct PriceRow {
    long t = 0;
    double v = 0.0;
    double c = 0.0;
    std::optional<double> linear_da_price;  // midpoint double auction, linear quotes
    std::optional<double> pooling_price;    // always the reference when it trades
};

std::vector<PriceRow> simulate_prices(long periods, double reference, std::uint64_t seed = 42);

// Trade frequency of the linear-strategy double auction (exact: 9/32).
double linear_da_trade_frequency();

}  // namespace refrule
