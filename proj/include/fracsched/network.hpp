#pragma once

// Network data model for the physical interference model: nodes on a square,
// directed links, SINR evaluation and feasibility of concurrent link sets.
//
// Coordinates are integers in micrometres, so with an even path-loss exponent
// every received power P / d^alpha is rational and feasibility is decided
// exactly. A double-precision filter answers almost every query; only when
// the double margin is within kFilterTolerance of the signal does the exact
// rational test run. Odd or fractional exponents use doubles throughout and
// the network reports exact_model() == false.

#include "fracsched/errors.hpp"
#include "fracsched/link_set.hpp"
#include "fracsched/pcg64.hpp"
#include "fracsched/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracsched {

inline constexpr unsigned kCoordinateDigits = 6;
inline constexpr std::int64_t kCoordinateScale = 1'000'000;  // micrometres per metre

struct PhysParams {
    Rational power_mw = Rational(300);
    Rational noise_mw = Rational(8, 100'000'000'000LL);
    Rational beta = Rational(31623, 100);
    Rational alpha = Rational(4);

    void validate() const {
        if (power_mw <= 0) throw std::invalid_argument("power_mw must be positive");
        if (noise_mw <= 0) throw std::invalid_argument("noise_mw must be positive");
        if (beta <= 1) throw std::invalid_argument("beta must exceed 1");
        if (alpha <= 2) throw std::invalid_argument("alpha must exceed 2");
    }

    /// alpha / 2 when alpha is an even integer.
    [[nodiscard]] std::optional<unsigned> half_even_alpha() const {
        if (denominator(alpha) != 1) return std::nullopt;
        const BigInt a = numerator(alpha);
        if (a % 2 != 0 || a > 64) return std::nullopt;
        return static_cast<unsigned>(a / 2);
    }

    /// (P / (beta * gamma))^(1/alpha), in metres.
    [[nodiscard]] double connection_radius_m() const {
        return std::pow(to_double(power_mw / (beta * noise_mw)), 1.0 / to_double(alpha));
    }

    friend bool operator==(const PhysParams&, const PhysParams&) = default;
};

struct Node {
    std::uint32_t id = 0;
    std::int64_t x_um = 0;
    std::int64_t y_um = 0;

    friend bool operator==(const Node&, const Node&) = default;
};

struct Link {
    std::uint32_t id = 0;
    std::uint32_t sender = 0;
    std::uint32_t receiver = 0;

    friend bool operator==(const Link&, const Link&) = default;
};

/// Result of a SINR evaluation; `exact` is present under an even exponent.
struct SinrValue {
    double approx = 0.0;
    std::optional<Rational> exact;
};

class Network {
public:
    /// Relative margin below which the double filter defers to exact arithmetic.
    static constexpr double kFilterTolerance = 1e-9;

    Network(PhysParams params, std::int64_t side_um, std::vector<Node> nodes, std::vector<Link> links,
            std::optional<std::uint64_t> seed = std::nullopt)
        : params_(std::move(params)),
          side_um_(side_um),
          nodes_(std::move(nodes)),
          links_(std::move(links)),
          seed_(seed) {
        params_.validate();
        if (side_um_ <= 0) throw std::invalid_argument("side length must be positive");
        half_alpha_ = params_.half_even_alpha();
        power_ = to_double(params_.power_mw);
        noise_ = to_double(params_.noise_mw);
        beta_ = to_double(params_.beta);
        alpha_ = to_double(params_.alpha);
        beta_noise_exact_ = params_.beta * params_.noise_mw;

        const std::size_t n = nodes_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Node& v = nodes_[i];
            if (v.id != i) throw std::invalid_argument("node ids must equal their position");
            if (v.x_um < 0 || v.y_um < 0 || v.x_um > side_um_ || v.y_um > side_um_)
                throw std::invalid_argument("node " + std::to_string(i) + " lies outside the deployment square");
        }
        {
            std::vector<std::pair<std::int64_t, std::int64_t>> pts;
            pts.reserve(n);
            for (const Node& v : nodes_) pts.emplace_back(v.x_um, v.y_um);
            std::sort(pts.begin(), pts.end());
            if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
                throw std::invalid_argument("two nodes share a position");
        }

        path_loss_.assign(n * n, 0.0);
        rx_power_.assign(n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const double dx = static_cast<double>(nodes_[a].x_um - nodes_[b].x_um) / kCoordinateScale;
                const double dy = static_cast<double>(nodes_[a].y_um - nodes_[b].y_um) / kCoordinateScale;
                const double d2 = dx * dx + dy * dy;
                const double loss = std::pow(d2, alpha_ / 2.0);
                path_loss_[a * n + b] = path_loss_[b * n + a] = loss;
                rx_power_[a * n + b] = rx_power_[b * n + a] = power_ / loss;
            }
        }

        std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::size_t i = 0; i < links_.size(); ++i) {
            const Link& l = links_[i];
            if (l.id != i) throw std::invalid_argument("link ids must equal their position");
            if (l.sender >= n || l.receiver >= n)
                throw std::invalid_argument("link " + std::to_string(i) + " references an unknown node");
            if (l.sender == l.receiver)
                throw std::invalid_argument("link " + std::to_string(i) + " has sender == receiver");
            if (!pairs.emplace(std::min(l.sender, l.receiver), std::max(l.sender, l.receiver)).second)
                throw std::invalid_argument("more than one link joins nodes " + std::to_string(l.sender) +
                                            " and " + std::to_string(l.receiver));
            if (!pair_in_range(l.sender, l.receiver))
                throw std::invalid_argument("link " + std::to_string(i) + " is infeasible even in isolation");
        }
    }

    [[nodiscard]] const PhysParams& params() const { return params_; }
    [[nodiscard]] std::int64_t side_um() const { return side_um_; }
    [[nodiscard]] Rational side_m() const { return Rational(side_um_, kCoordinateScale); }
    [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
    [[nodiscard]] const std::vector<Link>& links() const { return links_; }
    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
    [[nodiscard]] std::size_t link_count() const { return links_.size(); }
    [[nodiscard]] const Link& link(std::size_t e) const { return links_[e]; }
    [[nodiscard]] std::optional<std::uint64_t> seed() const { return seed_; }

    /// True when SINR comparisons are exact (even integer alpha).
    [[nodiscard]] bool exact_model() const { return half_alpha_.has_value(); }

    /// d_ab^alpha in metres^alpha.
    [[nodiscard]] double path_loss(std::size_t a, std::size_t b) const { return path_loss_[a * nodes_.size() + b]; }
    /// P / d_ab^alpha in milliwatts.
    [[nodiscard]] double rx_power(std::size_t a, std::size_t b) const { return rx_power_[a * nodes_.size() + b]; }
    [[nodiscard]] double signal(std::size_t e) const { return rx_power(links_[e].sender, links_[e].receiver); }

    /// Exact P / d_ab^alpha; requires exact_model().
    [[nodiscard]] Rational exact_rx_power(std::size_t a, std::size_t b) const {
        if (!half_alpha_) throw PreconditionError("exact received power needs an even integer alpha");
        const BigInt dx = BigInt(nodes_[a].x_um) - nodes_[b].x_um;
        const BigInt dy = BigInt(nodes_[a].y_um) - nodes_[b].y_um;
        const BigInt sq_um = dx * dx + dy * dy;
        const unsigned h = *half_alpha_;
        // d^alpha = sq_um^h / 10^(12h)
        return params_.power_mw * Rational(pow10(12 * h), boost::multiprecision::pow(sq_um, h));
    }

    /// Whether a singleton link between a and b meets the threshold.
    [[nodiscard]] bool pair_in_range(std::size_t a, std::size_t b) const {
        const double s = rx_power(a, b);
        const double margin = s - beta_ * noise_;
        if (!half_alpha_) return s / noise_ >= beta_;
        if (margin > kFilterTolerance * s) return true;
        if (margin < -kFilterTolerance * s) return false;
        return exact_rx_power(a, b) >= beta_noise_exact_;
    }

    enum class Verdict { no, yes, unsure };

    /// Threshold test for one link with accumulated interference (double).
    [[nodiscard]] Verdict meets_threshold(double signal_mw, double interference_mw) const {
        if (!half_alpha_) return signal_mw / (noise_ + interference_mw) >= beta_ ? Verdict::yes : Verdict::no;
        const double margin = signal_mw - beta_ * (noise_ + interference_mw);
        if (margin > kFilterTolerance * signal_mw) return Verdict::yes;
        if (margin < -kFilterTolerance * signal_mw) return Verdict::no;
        return Verdict::unsure;
    }

    /// Exact SINR threshold test of every member; links must be node-disjoint.
    [[nodiscard]] bool exact_all_meet_threshold(std::span<const std::uint32_t> members) const {
        for (std::uint32_t e : members) {
            Rational interference = params_.noise_mw;
            for (std::uint32_t f : members)
                if (f != e) interference += exact_rx_power(links_[f].sender, links_[e].receiver);
            if (exact_rx_power(links_[e].sender, links_[e].receiver) < params_.beta * interference) return false;
        }
        return true;
    }

    /// Maximum node degree of the undirected graph.
    [[nodiscard]] std::size_t max_degree() const {
        std::vector<std::size_t> degree(nodes_.size(), 0);
        for (const Link& l : links_) {
            ++degree[l.sender];
            ++degree[l.receiver];
        }
        return degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
    }

private:
    PhysParams params_;
    std::int64_t side_um_;
    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::optional<std::uint64_t> seed_;
    std::optional<unsigned> half_alpha_;
    double power_ = 0, noise_ = 0, beta_ = 0, alpha_ = 0;
    Rational beta_noise_exact_;
    std::vector<double> path_loss_;
    std::vector<double> rx_power_;
};

namespace detail {
inline void check_link_ids(const Network& net, const LinkSet& set) {
    if (!set.empty() && set.back() >= net.link_count())
        throw std::invalid_argument("link id " + std::to_string(set.back()) + " is not in the network");
}
}  // namespace detail

/// SINR of link e when every link in `active` transmits.
inline SinrValue sinr(const Network& net, std::size_t e, const LinkSet& active) {
    detail::check_link_ids(net, active);
    if (e >= net.link_count()) throw std::invalid_argument("link id " + std::to_string(e) + " is not in the network");
    if (!active.contains(e)) throw PreconditionError("sinr: link is not a member of the active set");

    const Link& target = net.link(e);
    SinrValue out;
    // An interferer sending from the target's receiver has unbounded power there.
    bool swamped = false;
    active.for_each([&](std::size_t f) { swamped = swamped || (f != e && net.link(f).sender == target.receiver); });
    if (swamped) {
        out.approx = 0.0;
        if (net.exact_model()) out.exact = Rational(0);
        return out;
    }
    double interference = 0.0;
    active.for_each([&](std::size_t f) {
        if (f != e) interference += net.rx_power(net.link(f).sender, target.receiver);
    });
    out.approx = net.signal(e) / (to_double(net.params().noise_mw) + interference);
    if (net.exact_model()) {
        Rational denom = net.params().noise_mw;
        active.for_each([&](std::size_t f) {
            if (f != e) denom += net.exact_rx_power(net.link(f).sender, target.receiver);
        });
        out.exact = Rational(net.exact_rx_power(target.sender, target.receiver) / denom);
    }
    return out;
}

/// Node-disjoint, and every member's SINR reaches beta.
inline bool is_feasible(const Network& net, const LinkSet& set) {
    if (set.empty()) throw PreconditionError("feasibility is defined for non-empty link sets only");
    detail::check_link_ids(net, set);
    const std::vector<std::uint32_t> members = set.to_vector();

    std::vector<std::uint32_t> endpoints;
    endpoints.reserve(members.size() * 2);
    for (std::uint32_t e : members) {
        endpoints.push_back(net.link(e).sender);
        endpoints.push_back(net.link(e).receiver);
    }
    std::sort(endpoints.begin(), endpoints.end());
    if (std::adjacent_find(endpoints.begin(), endpoints.end()) != endpoints.end()) return false;

    bool unsure = false;
    for (std::uint32_t e : members) {
        double interference = 0.0;
        for (std::uint32_t f : members)
            if (f != e) interference += net.rx_power(net.link(f).sender, net.link(e).receiver);
        switch (net.meets_threshold(net.signal(e), interference)) {
            case Network::Verdict::no: return false;
            case Network::Verdict::unsure: unsure = true; break;
            case Network::Verdict::yes: break;
        }
    }
    if (unsure) return net.exact_all_meet_threshold(members);
    return true;
}

/// Maintains a feasible link set under push/pop, keeping the interference
/// seen at each member's receiver so a candidate costs O(|S|) to test.
/// Pops restore the saved sums bit-for-bit.
class IncrementalFeasibility {
public:
    explicit IncrementalFeasibility(const Network& net)
        : net_(net), interference_(net.link_count(), 0.0), node_busy_(net.node_count(), 0) {}

    /// Adds f if the enlarged set stays feasible; returns whether it did.
    bool try_push(std::uint32_t f) {
        const Link& lf = net_.link(f);
        if (node_busy_[lf.sender] || node_busy_[lf.receiver]) return false;

        bool unsure = false;
        double own = 0.0;
        for (std::uint32_t e : stack_) own += net_.rx_power(net_.link(e).sender, lf.receiver);
        switch (net_.meets_threshold(net_.signal(f), own)) {
            case Network::Verdict::no: return false;
            case Network::Verdict::unsure: unsure = true; break;
            case Network::Verdict::yes: break;
        }
        scratch_.clear();
        for (std::uint32_t e : stack_) {
            const double updated = interference_[e] + net_.rx_power(lf.sender, net_.link(e).receiver);
            switch (net_.meets_threshold(net_.signal(e), updated)) {
                case Network::Verdict::no: return false;
                case Network::Verdict::unsure: unsure = true; break;
                case Network::Verdict::yes: break;
            }
            scratch_.push_back(updated);
        }
        if (unsure) {
            stack_.push_back(f);
            const bool ok = net_.exact_all_meet_threshold(stack_);
            stack_.pop_back();
            if (!ok) return false;
        }

        for (std::size_t i = 0; i < stack_.size(); ++i) {
            undo_.push_back(interference_[stack_[i]]);
            interference_[stack_[i]] = scratch_[i];
        }
        interference_[f] = own;
        stack_.push_back(f);
        members_.insert(f);
        node_busy_[lf.sender] = node_busy_[lf.receiver] = 1;
        return true;
    }

    void pop() {
        const std::uint32_t f = stack_.back();
        stack_.pop_back();
        members_.erase(f);
        const Link& lf = net_.link(f);
        node_busy_[lf.sender] = node_busy_[lf.receiver] = 0;
        for (std::size_t i = stack_.size(); i-- > 0;) {
            interference_[stack_[i]] = undo_.back();
            undo_.pop_back();
        }
    }

    [[nodiscard]] bool node_busy(std::uint32_t node) const { return node_busy_[node] != 0; }
    [[nodiscard]] const LinkSet& members() const { return members_; }
    [[nodiscard]] std::span<const std::uint32_t> stack() const { return stack_; }
    [[nodiscard]] std::size_t depth() const { return stack_.size(); }

private:
    const Network& net_;
    std::vector<std::uint32_t> stack_;
    std::vector<double> interference_;
    std::vector<double> undo_;
    std::vector<double> scratch_;
    std::vector<char> node_busy_;
    LinkSet members_;
};

/// Converts a length in metres to integer micrometres; it must be exact.
inline std::int64_t metres_to_um(const Rational& metres) {
    const Rational um = metres * kCoordinateScale;
    if (denominator(um) != 1) throw std::invalid_argument("length is not a whole number of micrometres");
    const BigInt v = numerator(um);
    if (v > BigInt(std::numeric_limits<std::int64_t>::max() / 4))
        throw std::invalid_argument("length too large");
    return v.convert_to<std::int64_t>();
}

/// Random geometric network: n_nodes uniform in [0, side]^2 at micrometre
/// resolution, a link for every pair whose singleton is feasible, sender
/// picked by a fair coin. Pure function of its arguments.
inline Network generate_network(std::size_t n_nodes, const Rational& side_m, const PhysParams& params,
                                std::uint64_t seed) {
    if (n_nodes < 2) throw std::invalid_argument("need at least two nodes");
    if (side_m <= 0) throw std::invalid_argument("side length must be positive");
    params.validate();
    const std::int64_t side_um = metres_to_um(side_m);
    const auto span_um = static_cast<std::uint64_t>(side_um) + 1;
    if (span_um < (1u << 31) && n_nodes > span_um * span_um)
        throw std::invalid_argument("more nodes than distinct grid positions");

    Pcg64 placement(seed, streams::kNodePlacement);
    std::vector<Node> nodes;
    nodes.reserve(n_nodes);
    std::set<std::pair<std::int64_t, std::int64_t>> taken;
    for (std::uint32_t i = 0; i < n_nodes; ++i) {
        std::pair<std::int64_t, std::int64_t> p;
        do {
            p.first = static_cast<std::int64_t>(placement.below(span_um));
            p.second = static_cast<std::int64_t>(placement.below(span_um));
        } while (!taken.insert(p).second);
        nodes.push_back(Node{i, p.first, p.second});
    }

    const Network bare(params, side_um, nodes, {}, seed);
    Pcg64 coins(seed, streams::kSenderCoins);
    std::vector<Link> links;
    for (std::uint32_t a = 0; a < n_nodes; ++a) {
        for (std::uint32_t b = a + 1; b < n_nodes; ++b) {
            if (!bare.pair_in_range(a, b)) continue;
            const bool flip = coins.coin();
            links.push_back(Link{static_cast<std::uint32_t>(links.size()), flip ? b : a, flip ? a : b});
        }
    }
    return Network(params, side_um, std::move(nodes), std::move(links), seed);
}

}  // namespace fracsched
