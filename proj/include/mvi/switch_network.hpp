#pragma once

// Digital selection of n identical coils through per-coil MEMS switches.
//
// Each coil i carries a parallel switch PSW_i and a two-position
// parallel/series switch PSSW_i. The hardware reaches exactly the
// topologies "k coils in series, followed by a bank of m coils in
// parallel", with the remaining n - k - m coils disconnected. Those (k, m)
// pairs give n(n+1)/2 distinct inductance values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "mvi/detail/dense_lu.hpp"
#include "mvi/errors.hpp"

namespace mvi {

enum class ParallelSwitch { open, closed };
enum class SeriesSwitch { open, up, down };

struct CoilSwitches {
    ParallelSwitch psw = ParallelSwitch::open;
    SeriesSwitch pssw = SeriesSwitch::open;
};

/// Switch states for every coil, coil 1 first.
///
/// Text form: one character per coil,
///   S  series select   (PSW open,   PSSW up)
///   P  parallel select (PSW closed, PSSW down)
///   O  disconnected    (both open)
/// Characters are case-insensitive.
struct SwitchWord {
    std::vector<CoilSwitches> coils;

    static SwitchWord parse(std::string_view text) {
        SwitchWord w;
        for (std::size_t i = 0; i < text.size(); ++i) {
            switch (text[i]) {
            case 'S': case 's': w.coils.push_back({ParallelSwitch::open, SeriesSwitch::up}); break;
            case 'P': case 'p': w.coils.push_back({ParallelSwitch::closed, SeriesSwitch::down}); break;
            case 'O': case 'o': w.coils.push_back({ParallelSwitch::open, SeriesSwitch::open}); break;
            default:
                throw ValidationError("word", "invalid character '" + std::string(1, text[i]) +
                                                  "' at position " + std::to_string(i + 1) +
                                                  " (expected S, P or O)");
            }
        }
        if (w.coils.empty()) throw ValidationError("word", "switch word is empty");
        return w;
    }

    /// Text form; coils in a state with no letter are written as '?'.
    std::string str() const {
        std::string out;
        for (const auto& c : coils) {
            if (c.psw == ParallelSwitch::open && c.pssw == SeriesSwitch::up) out += 'S';
            else if (c.psw == ParallelSwitch::closed && c.pssw == SeriesSwitch::down) out += 'P';
            else if (c.psw == ParallelSwitch::open && c.pssw == SeriesSwitch::open) out += 'O';
            else out += '?';
        }
        return out;
    }
};

/// Canonical (k series, m parallel) selection out of n coils.
struct SwitchConfiguration {
    unsigned series_count = 0;
    unsigned parallel_count = 0;
    unsigned coil_count = 0;

    friend bool operator==(const SwitchConfiguration&, const SwitchConfiguration&) = default;
};

inline void validate(const SwitchConfiguration& c) {
    if (c.coil_count < 1) throw ValidationError("coil_count", "need at least one coil");
    if (c.series_count + c.parallel_count > c.coil_count)
        throw ValidationError("configuration", "k + m exceeds the number of coils");
    if (c.series_count == 0 && c.parallel_count == 0)
        throw ValidationError("configuration", "no coil selected");
    if (c.parallel_count == 1)
        throw ValidationError("parallel_count", "a one-coil parallel bank must be expressed as series");
}

struct ParsedSwitchWord {
    SwitchConfiguration config;
    std::vector<std::string> notes;
};

inline ParsedSwitchWord parse_switch_word(const SwitchWord& word) {
    enum class Role { series, parallel, off };
    if (word.coils.empty()) throw ValidationError("word", "switch word is empty");

    ParsedSwitchWord out;
    std::vector<Role> roles;
    roles.reserve(word.coils.size());
    for (std::size_t i = 0; i < word.coils.size(); ++i) {
        const auto [psw, pssw] = word.coils[i];
        const std::string coil = "coil " + std::to_string(i + 1);
        if (psw == ParallelSwitch::closed && pssw == SeriesSwitch::up)
            throw ConflictError(coil + ": parallel switch closed while series switch is up");
        if (psw == ParallelSwitch::open && pssw == SeriesSwitch::up) roles.push_back(Role::series);
        else if (psw == ParallelSwitch::closed && pssw == SeriesSwitch::down) roles.push_back(Role::parallel);
        else {
            if (!(psw == ParallelSwitch::open && pssw == SeriesSwitch::open))
                out.notes.push_back(coil + ": incomplete parallel selection, coil is not connected");
            roles.push_back(Role::off);
        }
    }

    if (roles.front() == Role::off)
        throw NoPathError("no conducting path from IN to OUT (coil 1 is not connected)");

    std::size_t i = 0;
    unsigned k = 0, m = 0;
    while (i < roles.size() && roles[i] == Role::series) { ++k; ++i; }
    while (i < roles.size() && roles[i] == Role::parallel) { ++m; ++i; }
    for (std::size_t j = i; j < roles.size(); ++j) {
        if (roles[j] != Role::off)
            throw ValidationError("word", "coil " + std::to_string(j + 1) +
                                              " follows the selected group; only a series chain "
                                              "followed by one parallel bank is reachable");
    }
    if (m == 1) {
        out.notes.push_back("coil " + std::to_string(k + 1) +
                            ": single-coil parallel bank treated as a series coil");
        ++k;
        m = 0;
    }
    out.config = {k, m, static_cast<unsigned>(word.coils.size())};
    return out;
}

inline ParsedSwitchWord parse_switch_word(std::string_view text) {
    return parse_switch_word(SwitchWord::parse(text));
}

/// Switch settings that realize `config`: S^k P^m O^(n-k-m).
inline SwitchWord synthesize_word(const SwitchConfiguration& config) {
    validate(config);
    std::string text(config.series_count, 'S');
    text.append(config.parallel_count, 'P');
    text.append(config.coil_count - config.series_count - config.parallel_count, 'O');
    return SwitchWord::parse(text);
}

/// k L + L / m (the bank term only for m >= 2).
inline double total_inductance(const SwitchConfiguration& config, double unit_inductance) {
    validate(config);
    if (!(unit_inductance > 0.0)) throw ValidationError("unit_inductance", "must be positive");
    const double series = static_cast<double>(config.series_count) * unit_inductance;
    const double bank = config.parallel_count >= 2
                            ? unit_inductance / static_cast<double>(config.parallel_count)
                            : 0.0;
    return series + bank;
}

inline unsigned long long step_count(long long n) {
    if (n < 1) throw ValidationError("n", "coil count must be at least 1");
    const auto u = static_cast<unsigned long long>(n);
    return u * (u + 1) / 2;
}

struct Step {
    SwitchConfiguration config;
    double factor = 0.0; // multiple of the unit coil inductance
    double inductance = 0.0;
};

struct StepTable {
    double unit_inductance = 0.0;
    std::vector<Step> steps; // ascending by factor
};

/// Every reachable (k, m), sorted by resulting inductance.
inline StepTable enumerate_steps(unsigned n, double unit_inductance) {
    if (n < 1) throw ValidationError("n", "coil count must be at least 1");
    if (!(unit_inductance > 0.0)) throw ValidationError("unit_inductance", "must be positive");
    StepTable table{unit_inductance, {}};
    for (unsigned k = 0; k <= n; ++k) {
        for (unsigned m = 0; m + k <= n; ++m) {
            if (m == 1 || (k == 0 && m == 0)) continue;
            const SwitchConfiguration c{k, m, n};
            table.steps.push_back({c, total_inductance(c, 1.0), total_inductance(c, unit_inductance)});
        }
    }
    std::sort(table.steps.begin(), table.steps.end(),
              [](const Step& a, const Step& b) { return a.factor < b.factor; });
    auto dup = std::adjacent_find(table.steps.begin(), table.steps.end(),
                                  [](const Step& a, const Step& b) { return a.factor == b.factor; });
    if (dup != table.steps.end())
        throw Error("enumerate_steps: duplicate inductance factor " + std::to_string(dup->factor));
    return table;
}

/// Two-terminal graph of inductor branches. Node 0 is IN, node 1 is OUT.
class InductorNetwork {
public:
    static constexpr std::size_t in = 0;
    static constexpr std::size_t out = 1;

    struct Branch {
        std::size_t a = 0;
        std::size_t b = 0;
        double inductance = 0.0;
    };

    InductorNetwork() = default;

    std::size_t add_node() { return node_count_++; }

    void add_branch(std::size_t a, std::size_t b, double inductance) {
        if (a >= node_count_ || b >= node_count_)
            throw ValidationError("branch", "node index out of range");
        if (!(inductance > 0.0) || !std::isfinite(inductance))
            throw ValidationError("branch", "inductance must be positive");
        branches_.push_back({a, b, inductance});
    }

    std::size_t node_count() const noexcept { return node_count_; }
    const std::vector<Branch>& branches() const noexcept { return branches_; }

private:
    std::size_t node_count_ = 2;
    std::vector<Branch> branches_;
};

/// Series chain IN -> ... -> node_k, then m parallel branches node_k -> OUT.
inline InductorNetwork build_network(const SwitchConfiguration& config, double unit_inductance) {
    validate(config);
    if (!(unit_inductance > 0.0)) throw ValidationError("unit_inductance", "must be positive");
    InductorNetwork net;
    std::size_t node = InductorNetwork::in;
    for (unsigned i = 0; i < config.series_count; ++i) {
        const bool last = (i + 1 == config.series_count) && config.parallel_count == 0;
        const std::size_t next = last ? InductorNetwork::out : net.add_node();
        net.add_branch(node, next, unit_inductance);
        node = next;
    }
    for (unsigned j = 0; j < config.parallel_count; ++j)
        net.add_branch(node, InductorNetwork::out, unit_inductance);
    return net;
}

/// Two-terminal equivalent by nodal analysis with branch weights 1/L.
/// Uncoupled inductors combine exactly like resistors, so injecting a unit
/// flow at IN with OUT grounded leaves the equivalent inductance at IN.
inline double effective_inductance(const InductorNetwork& net) {
    const std::size_t n = net.node_count();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& br : net.branches()) {
        if (!(br.inductance > 0.0)) throw ValidationError("branch", "inductance must be positive");
        adj[br.a].push_back(br.b);
        adj[br.b].push_back(br.a);
    }

    // Restrict to the component containing IN; floating islands would make
    // the full Laplacian singular without affecting the answer.
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    frontier.push(InductorNetwork::in);
    seen[InductorNetwork::in] = true;
    while (!frontier.empty()) {
        const auto u = frontier.front();
        frontier.pop();
        for (auto v : adj[u])
            if (!seen[v]) { seen[v] = true; frontier.push(v); }
    }
    if (!seen[InductorNetwork::out])
        throw SingularSystemError("effective_inductance: IN and OUT are not connected");

    // Unknown index for every reachable node except the grounded OUT.
    std::vector<std::ptrdiff_t> index(n, -1);
    std::size_t unknowns = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (seen[v] && v != InductorNetwork::out) index[v] = static_cast<std::ptrdiff_t>(unknowns++);

    detail::DenseMatrix g(unknowns);
    for (const auto& br : net.branches()) {
        if (br.a == br.b || !seen[br.a]) continue;
        const double y = 1.0 / br.inductance;
        const auto ia = index[br.a], ib = index[br.b];
        if (ia >= 0) g(ia, ia) += y;
        if (ib >= 0) g(ib, ib) += y;
        if (ia >= 0 && ib >= 0) { g(ia, ib) -= y; g(ib, ia) -= y; }
    }
    std::vector<double> rhs(unknowns, 0.0);
    rhs[static_cast<std::size_t>(index[InductorNetwork::in])] = 1.0;
    const auto v = detail::lu_solve(std::move(g), rhs);
    return v[static_cast<std::size_t>(index[InductorNetwork::in])];
}

} // namespace mvi
