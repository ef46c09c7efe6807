#include "qaemu/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <optional>
#include <queue>
#include <stdexcept>

#include "qaemu/rng.hpp"

namespace qaemu {

std::vector<std::uint32_t> Embedding::active_qubits() const {
    std::vector<std::uint32_t> all;
    for (const auto& [var, chain] : chains) all.insert(all.end(), chain.begin(), chain.end());
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> logical_edges(const IsingModel& model) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& c : model.couplings())
        if (c.value != 0.0) edges.emplace_back(c.i, c.j);
    return edges;
}

EmbeddingValidation validate_embedding(
    const Embedding& emb, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
    const HardwareGraph& hardware) {
    EmbeddingValidation result;
    const auto fail = [&result](std::string msg) {
        result.ok = false;
        result.violations.push_back(std::move(msg));
    };

    std::vector<std::uint32_t> seen;
    for (const auto& [var, chain] : emb.chains) {
        if (chain.empty()) fail("chain of variable " + std::to_string(var) + " is empty");
        for (const std::uint32_t q : chain) {
            if (!hardware.has_node(q))
                fail("chain of variable " + std::to_string(var) + " uses unknown qubit " +
                     std::to_string(q));
            seen.push_back(q);
        }
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        fail("chains are not pairwise disjoint");

    // Connectivity of each chain's induced subgraph.
    for (const auto& [var, chain] : emb.chains) {
        if (chain.empty()) continue;
        std::vector<std::uint32_t> sorted_chain(chain.begin(), chain.end());
        std::sort(sorted_chain.begin(), sorted_chain.end());
        std::vector<bool> reached(sorted_chain.size(), false);
        std::deque<std::uint32_t> queue{sorted_chain.front()};
        reached[0] = true;
        std::size_t count = 1;
        while (!queue.empty()) {
            const std::uint32_t q = queue.front();
            queue.pop_front();
            for (const std::uint32_t nbr : hardware.neighbors(q)) {
                const auto it = std::lower_bound(sorted_chain.begin(), sorted_chain.end(), nbr);
                if (it == sorted_chain.end() || *it != nbr) continue;
                const auto pos = static_cast<std::size_t>(it - sorted_chain.begin());
                if (!reached[pos]) {
                    reached[pos] = true;
                    ++count;
                    queue.push_back(nbr);
                }
            }
        }
        if (count != sorted_chain.size())
            fail("chain of variable " + std::to_string(var) + " is not connected");
    }

    for (const auto& [a, b] : edges) {
        const auto ia = emb.chains.find(a);
        const auto ib = emb.chains.find(b);
        if (ia == emb.chains.end() || ib == emb.chains.end()) {
            fail("logical edge (" + std::to_string(a) + "," + std::to_string(b) +
                 ") references a variable without a chain");
            continue;
        }
        bool covered = false;
        for (const std::uint32_t qa : ia->second) {
            for (const std::uint32_t qb : ib->second) {
                if (hardware.has_edge(qa, qb)) {
                    covered = true;
                    break;
                }
            }
            if (covered) break;
        }
        if (!covered)
            fail("logical edge (" + std::to_string(a) + "," + std::to_string(b) +
                 ") has no hardware edge between its chains");
    }
    return result;
}

namespace {

// Router state for the embedding heuristic. Chains may temporarily share
// qubits (overfill); the cost of entering a qubit grows exponentially with
// its occupancy, so successive re-routing rounds drive chains apart until
// every qubit hosts at most one chain.
struct RouterState {
    const HardwareGraph& hw;
    std::vector<int> occupancy;                      // node position -> #chains using it
    std::vector<std::vector<std::uint32_t>> chains;  // variable -> qubit ids

    RouterState(const HardwareGraph& hardware, std::size_t num_vars)
        : hw(hardware), occupancy(hardware.num_nodes(), 0), chains(num_vars) {}

    std::size_t position(std::uint32_t id) const {
        const auto& nodes = hw.nodes();
        return static_cast<std::size_t>(
            std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
    }
    double enter_weight(std::size_t pos) const {
        return std::pow(8.0, static_cast<double>(occupancy[pos]));
    }
    void assign(std::size_t v, std::vector<std::uint32_t> chain) {
        for (const std::uint32_t q : chain) ++occupancy[position(q)];
        chains[v] = std::move(chain);
    }
    void tear_out(std::size_t v) {
        for (const std::uint32_t q : chains[v]) --occupancy[position(q)];
        chains[v].clear();
    }
    int max_occupancy() const {
        int m = 0;
        for (const int o : occupancy) m = std::max(m, o);
        return m;
    }
};

struct ChainField {
    std::vector<double> dist;       // -1 = unreachable
    std::vector<std::uint32_t> parent;  // UINT32_MAX = adjacent to the source chain
};

// Dijkstra from the frontier of an existing chain over the whole graph;
// entering a qubit costs 8^occupancy. The source chain itself is not
// traversed.
ChainField field_from_chain(const RouterState& st, const std::vector<std::uint32_t>& source) {
    ChainField field;
    field.dist.assign(st.hw.num_nodes(), -1.0);
    field.parent.assign(st.hw.num_nodes(), UINT32_MAX);

    std::vector<bool> in_source(st.hw.num_nodes(), false);
    for (const std::uint32_t q : source) in_source[st.position(q)] = true;

    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    for (const std::uint32_t q : source) {
        for (const std::uint32_t nbr : st.hw.neighbors(q)) {
            const std::size_t pos = st.position(nbr);
            if (in_source[pos]) continue;
            const double c = st.enter_weight(pos);
            if (field.dist[pos] < 0.0 || c < field.dist[pos]) {
                field.dist[pos] = c;
                field.parent[pos] = UINT32_MAX;
                queue.emplace(c, nbr);
            }
        }
    }
    while (!queue.empty()) {
        const auto [d, cur] = queue.top();
        queue.pop();
        const std::size_t cur_pos = st.position(cur);
        if (d != field.dist[cur_pos]) continue;
        for (const std::uint32_t nbr : st.hw.neighbors(cur)) {
            const std::size_t pos = st.position(nbr);
            if (in_source[pos]) continue;
            const double nd = d + st.enter_weight(pos);
            if (field.dist[pos] < 0.0 || nd < field.dist[pos]) {
                field.dist[pos] = nd;
                field.parent[pos] = cur;
                queue.emplace(nd, nbr);
            }
        }
    }
    return field;
}

// Routes variable v as a root qubit plus a shortest path toward each target
// chain. The far half of every connection path extends the target's chain
// instead of v's: crowded chains thereby gain frontier, which is what lets
// high-degree variables acquire more adjacent chains than a single qubit's
// degree allows. Returns false only when some target chain is unreachable.
bool route_variable(RouterState& st, std::size_t v, const std::vector<std::size_t>& targets,
                    Rng& rng) {
    if (targets.empty()) {
        double best = -1.0;
        std::vector<std::uint32_t> candidates;
        for (const std::uint32_t id : st.hw.nodes()) {
            const double w = st.enter_weight(st.position(id));
            if (best < 0.0 || w < best) {
                best = w;
                candidates.assign(1, id);
            } else if (w == best) {
                candidates.push_back(id);
            }
        }
        st.assign(v, {candidates[rng.below(candidates.size())]});
        return true;
    }

    std::vector<ChainField> fields;
    fields.reserve(targets.size());
    for (const std::size_t w : targets) fields.push_back(field_from_chain(st, st.chains[w]));

    // Root minimizing root weight plus path costs to every target. Each
    // field distance already charges the root once; discount the extras.
    double best_total = -1.0;
    std::vector<std::uint32_t> best_roots;
    for (const std::uint32_t id : st.hw.nodes()) {
        const std::size_t pos = st.position(id);
        double total = st.enter_weight(pos) * (1.0 - static_cast<double>(fields.size()));
        bool feasible = true;
        for (const auto& f : fields) {
            if (f.dist[pos] < 0.0) {
                feasible = false;
                break;
            }
            total += f.dist[pos];
        }
        if (!feasible) continue;
        if (best_total < 0.0 || total < best_total) {
            best_total = total;
            best_roots.assign(1, id);
        } else if (total == best_total) {
            best_roots.push_back(id);
        }
    }
    if (best_roots.empty()) return false;
    const std::uint32_t root = best_roots[rng.below(best_roots.size())];

    std::vector<std::uint32_t> chain{root};
    for (std::size_t t = 0; t < fields.size(); ++t) {
        std::vector<std::uint32_t> path;  // nodes past the root, nearest first
        std::uint32_t cur = root;
        while (fields[t].parent[st.position(cur)] != UINT32_MAX) {
            cur = fields[t].parent[st.position(cur)];
            path.push_back(cur);
        }
        const std::size_t keep = (path.size() + 1) / 2;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (i < keep) {
                chain.push_back(path[i]);
            } else {
                auto& target_chain = st.chains[targets[t]];
                if (std::find(target_chain.begin(), target_chain.end(), path[i]) ==
                    target_chain.end()) {
                    ++st.occupancy[st.position(path[i])];
                    target_chain.push_back(path[i]);
                }
            }
        }
    }
    std::sort(chain.begin(), chain.end());
    chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
    st.assign(v, std::move(chain));
    return true;
}

// Drops chain leaves that neither connectivity nor edge coverage need.
void prune_chain(RouterState& st, std::size_t v,
                 const std::vector<std::vector<std::uint32_t>>& ladj) {
    bool changed = true;
    while (changed && st.chains[v].size() > 1) {
        changed = false;
        for (std::size_t k = 0; k < st.chains[v].size(); ++k) {
            const std::uint32_t q = st.chains[v][k];
            int intra = 0;
            for (const std::uint32_t other : st.chains[v])
                if (other != q && st.hw.has_edge(q, other)) ++intra;
            if (intra > 1) continue;  // not a leaf: removal could disconnect

            bool needed = false;
            for (const std::uint32_t w : ladj[v]) {
                if (st.chains[w].empty()) continue;
                bool covered_without = false;
                for (const std::uint32_t mine : st.chains[v]) {
                    if (mine == q) continue;
                    for (const std::uint32_t theirs : st.chains[w]) {
                        if (st.hw.has_edge(mine, theirs)) {
                            covered_without = true;
                            break;
                        }
                    }
                    if (covered_without) break;
                }
                if (!covered_without) {
                    needed = true;
                    break;
                }
            }
            if (needed) continue;

            --st.occupancy[st.position(q)];
            st.chains[v].erase(st.chains[v].begin() + static_cast<std::ptrdiff_t>(k));
            changed = true;
            break;
        }
    }
}

}  // namespace

Embedding find_embedding(std::size_t num_variables,
                         const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                         const HardwareGraph& hardware, std::uint64_t seed,
                         unsigned max_restarts) {
    if (num_variables == 0) throw std::invalid_argument("problem must have at least one variable");
    if (num_variables > hardware.num_nodes())
        throw std::runtime_error("provably impossible: more variables than hardware qubits");

    std::vector<std::vector<std::uint32_t>> ladj(num_variables);
    for (auto [a, b] : edges) {
        if (a == b) throw std::invalid_argument("logical edge is a self-loop");
        if (a >= num_variables || b >= num_variables)
            throw std::invalid_argument("logical edge index out of range");
        ladj[a].push_back(b);
        ladj[b].push_back(a);
    }
    for (auto& nbrs : ladj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }

    constexpr unsigned kRoutingRounds = 12;

    for (unsigned restart = 0; restart < max_restarts; ++restart) {
        Rng rng(derive_seed(seed, "embed-restart", restart));

        // Connected routing order: grow a frontier over the logical graph,
        // always taking the highest-degree frontier variable (random
        // tie-break), so early routes have nearby targets.
        std::vector<std::uint64_t> tie_key(num_variables);
        for (auto& k : tie_key) k = rng.next_u64();
        std::vector<std::size_t> order;
        order.reserve(num_variables);
        std::vector<bool> queued(num_variables, false);
        std::vector<std::size_t> frontier;
        const auto pop_best = [&ladj, &tie_key](const std::vector<std::size_t>& pool) {
            std::size_t best = pool.front();
            for (const std::size_t v : pool) {
                if (ladj[v].size() > ladj[best].size() ||
                    (ladj[v].size() == ladj[best].size() && tie_key[v] < tie_key[best]))
                    best = v;
            }
            return best;
        };
        while (order.size() < num_variables) {
            if (frontier.empty()) {
                std::vector<std::size_t> unvisited;
                for (std::size_t v = 0; v < num_variables; ++v)
                    if (!queued[v]) unvisited.push_back(v);
                const std::size_t start = pop_best(unvisited);
                frontier.push_back(start);
                queued[start] = true;
            }
            const std::size_t next = pop_best(frontier);
            frontier.erase(std::find(frontier.begin(), frontier.end(), next));
            order.push_back(next);
            for (const std::uint32_t w : ladj[next]) {
                if (!queued[w]) {
                    queued[w] = true;
                    frontier.push_back(w);
                }
            }
        }

        RouterState st(hardware, num_variables);

        // Initial routes against already-routed neighbors only.
        bool routed = true;
        for (const std::size_t v : order) {
            std::vector<std::size_t> targets;
            for (const std::uint32_t w : ladj[v])
                if (!st.chains[w].empty()) targets.push_back(w);
            if (!route_variable(st, v, targets, rng)) {
                routed = false;
                break;
            }
        }
        if (!routed) continue;

        // Re-route every variable against all its neighbors until no qubit
        // is shared.
        bool success = st.max_occupancy() <= 1;
        for (unsigned round = 0; round < kRoutingRounds && !success; ++round) {
            for (const std::size_t v : order) {
                st.tear_out(v);
                std::vector<std::size_t> targets;
                for (const std::uint32_t w : ladj[v])
                    if (!st.chains[w].empty()) targets.push_back(w);
                if (!route_variable(st, v, targets, rng)) {
                    routed = false;
                    break;
                }
            }
            if (!routed) break;
            success = st.max_occupancy() <= 1;
        }
        if (!routed || !success) continue;

        for (std::size_t v = 0; v < num_variables; ++v) prune_chain(st, v, ladj);

        Embedding emb;
        for (std::size_t v = 0; v < num_variables; ++v) {
            std::sort(st.chains[v].begin(), st.chains[v].end());
            emb.chains[static_cast<std::uint32_t>(v)] = std::move(st.chains[v]);
        }
        if (!validate_embedding(emb, edges, hardware).ok) continue;
        return emb;
    }
    throw std::runtime_error("no embedding found after " + std::to_string(max_restarts) +
                             " restarts");
}


IsingModel embed_model(const IsingModel& model, const Embedding& emb,
                       const HardwareGraph& hardware) {
    if (emb.chain_strength <= 0.0)
        throw std::invalid_argument("chain strength must be positive");
    for (std::uint32_t v = 0; v < model.num_spins(); ++v) {
        const auto it = emb.chains.find(v);
        if (it == emb.chains.end() || it->second.empty())
            throw std::invalid_argument("invalid embedding: variable " + std::to_string(v) +
                                        " has no chain");
    }
    const auto validation = validate_embedding(emb, logical_edges(model), hardware);
    if (!validation.ok)
        throw std::invalid_argument("invalid embedding: " + validation.violations.front());

    const std::vector<std::uint32_t> active = emb.active_qubits();
    const auto dense = [&active](std::uint32_t id) {
        return static_cast<std::uint32_t>(
            std::lower_bound(active.begin(), active.end(), id) - active.begin());
    };

    std::vector<double> h(active.size(), 0.0);
    std::vector<CouplingEntry> couplings;

    for (const auto& [var, chain] : emb.chains) {
        if (var >= model.num_spins())
            throw std::invalid_argument("embedding chain for unknown variable " +
                                        std::to_string(var));
        const double share = model.h()[var] / static_cast<double>(chain.size());
        for (const std::uint32_t q : chain) h[dense(q)] += share;
        for (std::size_t a = 0; a < chain.size(); ++a)
            for (std::size_t b = a + 1; b < chain.size(); ++b)
                if (hardware.has_edge(chain[a], chain[b]))
                    couplings.push_back({dense(chain[a]), dense(chain[b]), -emb.chain_strength});
    }

    for (const auto& c : model.couplings()) {
        if (c.value == 0.0) continue;
        const auto& chain_i = emb.chains.at(c.i);
        const auto& chain_j = emb.chains.at(c.j);
        std::optional<std::pair<std::uint32_t, std::uint32_t>> designated;
        for (const std::uint32_t qa : chain_i) {
            for (const std::uint32_t qb : chain_j) {
                if (!hardware.has_edge(qa, qb)) continue;
                const std::pair<std::uint32_t, std::uint32_t> candidate{std::min(qa, qb),
                                                                        std::max(qa, qb)};
                if (!designated || candidate < *designated) designated = candidate;
            }
        }
        // Validation above guarantees at least one connecting edge.
        couplings.push_back({dense(designated->first), dense(designated->second), c.value});
    }

    return IsingModel(active.size(), std::move(h), couplings, model.offset());
}

std::size_t intra_chain_edges(const Embedding& emb, const HardwareGraph& hardware) {
    std::size_t count = 0;
    for (const auto& [var, chain] : emb.chains)
        for (std::size_t a = 0; a < chain.size(); ++a)
            for (std::size_t b = a + 1; b < chain.size(); ++b)
                if (hardware.has_edge(chain[a], chain[b])) ++count;
    return count;
}

UnembedResult unembed(const Sampleset& sampleset, const IsingModel& logical_model,
                      const Embedding& emb, ChainBreakPolicy policy, std::uint64_t seed) {
    const std::vector<std::uint32_t> active = emb.active_qubits();
    if (!sampleset.empty() && sampleset.num_spins() != active.size())
        throw std::invalid_argument(
            "dimension mismatch: sampleset states are not indexed by the embedding's qubits");
    if (emb.chains.size() != logical_model.num_spins())
        throw std::invalid_argument("embedding does not cover the logical model's variables");

    // Chains as dense spin indices, in logical-variable order.
    std::vector<std::vector<std::size_t>> chain_positions;
    chain_positions.reserve(emb.chains.size());
    for (std::uint32_t v = 0; v < logical_model.num_spins(); ++v) {
        const auto it = emb.chains.find(v);
        if (it == emb.chains.end())
            throw std::invalid_argument("embedding is missing variable " + std::to_string(v));
        std::vector<std::size_t> positions;
        positions.reserve(it->second.size());
        for (const std::uint32_t q : it->second)
            positions.push_back(static_cast<std::size_t>(
                std::lower_bound(active.begin(), active.end(), q) - active.begin()));
        chain_positions.push_back(std::move(positions));
    }

    Rng rng(derive_seed(seed, "unembed-ties"));
    std::vector<SampleRow> rows;
    std::uint64_t broken_reads = 0;

    for (const auto& row : sampleset.rows()) {
        bool broken = false;
        std::vector<std::int8_t> logical(logical_model.num_spins());
        for (std::size_t v = 0; v < chain_positions.size(); ++v) {
            int sum = 0;
            for (const std::size_t pos : chain_positions[v]) sum += row.state.spin(pos);
            if (static_cast<std::size_t>(std::abs(sum)) != chain_positions[v].size())
                broken = true;
            if (sum > 0)
                logical[v] = 1;
            else if (sum < 0)
                logical[v] = -1;
            else
                logical[v] = static_cast<std::int8_t>(rng.spin());
        }
        if (broken) broken_reads += row.occurrences;
        if (broken && policy == ChainBreakPolicy::Discard) continue;
        SpinState state(std::move(logical));
        const double e = energy(logical_model, state);
        rows.push_back({std::move(state), e, row.occurrences});
    }

    UnembedResult result{Sampleset(std::move(rows), logical_model.fingerprint()), 0.0};
    if (sampleset.total_reads() > 0)
        result.break_fraction =
            static_cast<double>(broken_reads) / static_cast<double>(sampleset.total_reads());
    return result;
}

}  // namespace qaemu
