#include "srn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace srn {

namespace {

// Tarjan strongly connected components, iterative. Returns component id per
// state; ids are assigned in reverse topological order.
std::vector<std::uint32_t> strongly_connected_components(const Ctmc& ctmc,
                                                         std::uint32_t& component_count) {
    const auto n = static_cast<std::uint32_t>(ctmc.state_count());
    constexpr std::uint32_t kUnvisited = 0xFFFFFFFF;
    std::vector<std::uint32_t> index(n, kUnvisited), lowlink(n, 0), component(n, kUnvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::uint32_t next_index = 0;
    component_count = 0;

    struct Frame {
        std::uint32_t state;
        std::size_t edge;
    };
    std::vector<Frame> call_stack;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call_stack.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            std::uint32_t v = frame.state;
            if (frame.edge < ctmc.rows[v].size()) {
                std::uint32_t w = ctmc.rows[v][frame.edge].first;
                ++frame.edge;
                if (index[w] == kUnvisited) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call_stack.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                if (lowlink[v] == index[v]) {
                    std::uint32_t w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        component[w] = component_count;
                    } while (w != v);
                    ++component_count;
                }
                call_stack.pop_back();
                if (!call_stack.empty()) {
                    std::uint32_t parent = call_stack.back().state;
                    lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
                }
            }
        }
    }
    return component;
}

// GTH elimination on the dense off-diagonal rate matrix of the given states.
// No subtractions occur, so stiff rate ratios lose no precision.
std::vector<double> gth(const std::vector<std::uint32_t>& states, const Ctmc& ctmc) {
    const std::size_t n = states.size();
    std::vector<double> pi(n, 0.0);
    if (n == 1) {
        pi[0] = 1.0;
        return pi;
    }
    std::vector<std::uint32_t> local(ctmc.state_count(), 0);
    for (std::size_t i = 0; i < n; ++i) local[states[i]] = static_cast<std::uint32_t>(i);

    std::vector<double> rate(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [target, r] : ctmc.rows[states[i]])
            if (r > 0.0) rate[i * n + local[target]] += r;

    std::vector<double> pivot(n, 0.0);
    for (std::size_t k = n - 1; k >= 1; --k) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += rate[k * n + j];
        if (!(s > 0.0))
            throw Singular("zero pivot while eliminating state " + std::to_string(states[k]));
        pivot[k] = s;
        for (std::size_t i = 0; i < k; ++i) {
            double into_k = rate[i * n + k];
            if (into_k == 0.0) continue;
            double scaled = into_k / s;
            for (std::size_t j = 0; j < k; ++j) {
                if (j == i) continue;
                rate[i * n + j] += scaled * rate[k * n + j];
            }
        }
    }

    pi[0] = 1.0;
    double total = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        double inflow = 0.0;
        for (std::size_t i = 0; i < k; ++i) inflow += pi[i] * rate[i * n + k];
        pi[k] = inflow / pivot[k];
        total += pi[k];
    }
    for (double& p : pi) p /= total;
    return pi;
}

}  // namespace

StationaryDistribution steady_state(const Ctmc& ctmc) {
    const auto n = static_cast<std::uint32_t>(ctmc.state_count());
    if (n == 0) throw ReducibleChain("chain has no states");

    std::uint32_t component_count = 0;
    auto component = strongly_connected_components(ctmc, component_count);

    // a component is recurrent iff it has no edge leaving it
    std::vector<bool> closed(component_count, true);
    for (std::uint32_t s = 0; s < n; ++s)
        for (const auto& [target, r] : ctmc.rows[s])
            if (r > 0.0 && component[target] != component[s]) closed[component[s]] = false;

    std::uint32_t recurrent = component_count;
    for (std::uint32_t c = 0; c < component_count; ++c) {
        if (!closed[c]) continue;
        if (recurrent != component_count)
            throw ReducibleChain("chain has more than one recurrent class");
        recurrent = c;
    }
    if (recurrent == component_count)
        throw ReducibleChain("chain has no recurrent class");

    StationaryDistribution result;
    result.probabilities.assign(n, 0.0);
    std::vector<std::uint32_t> members;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (component[s] == recurrent)
            members.push_back(s);
        else
            result.pruned_states.push_back(s);
    }

    std::vector<double> pi = gth(members, ctmc);
    for (std::size_t i = 0; i < members.size(); ++i)
        result.probabilities[members[i]] = pi[i];

    // residual of the balance equations over the full chain
    std::vector<double> flow(n, 0.0);
    for (std::uint32_t s = 0; s < n; ++s) {
        flow[s] -= result.probabilities[s] * ctmc.exit_rates[s];
        for (const auto& [target, r] : ctmc.rows[s]) flow[target] += result.probabilities[s] * r;
    }
    for (double f : flow) result.residual_inf_norm = std::max(result.residual_inf_norm, std::abs(f));
    return result;
}

double expected_reward(const StationaryDistribution& pi, std::span<const double> rewards) {
    if (pi.probabilities.size() != rewards.size())
        throw DimensionMismatch("reward vector has " + std::to_string(rewards.size()) +
                                " entries for " + std::to_string(pi.probabilities.size()) +
                                " states");
    double acc = 0.0;
    for (std::size_t i = 0; i < rewards.size(); ++i) acc += pi.probabilities[i] * rewards[i];
    return acc;
}

double state_probability(const StationaryDistribution& pi, const Ctmc& ctmc,
                         const std::function<bool(const Marking&)>& predicate) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ctmc.state_count(); ++i)
        if (predicate(ctmc.states[i])) acc += pi.probabilities[i];
    return acc;
}

}  // namespace srn
