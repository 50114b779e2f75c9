#pragma once

#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace mph {

/// Maximum cardinality matching in a bipartite graph (Hopcroft-Karp).
/// Left vertices are 0..left-1, right vertices 0..right-1.
class BipartiteMatcher {
public:
    static constexpr std::size_t kNil = std::numeric_limits<std::size_t>::max();

    BipartiteMatcher(std::size_t left, std::size_t right) : adj_(left), match_left_(left, kNil), match_right_(right, kNil) {}

    void add_edge(std::size_t u, std::size_t v) { adj_[u].push_back(v); }

    std::size_t left_size() const noexcept { return adj_.size(); }
    std::size_t right_size() const noexcept { return match_right_.size(); }

    std::size_t max_matching() {
        std::fill(match_left_.begin(), match_left_.end(), kNil);
        std::fill(match_right_.begin(), match_right_.end(), kNil);
        std::size_t size = 0;
        while (bfs())
            for (std::size_t u = 0; u < adj_.size(); ++u)
                if (match_left_[u] == kNil && dfs(u)) ++size;
        return size;
    }

    /// Right partner of left vertex u after max_matching(), or kNil.
    std::size_t partner_of(std::size_t u) const { return match_left_[u]; }

private:
    bool bfs() {
        dist_.assign(adj_.size(), kNil);
        std::queue<std::size_t> q;
        for (std::size_t u = 0; u < adj_.size(); ++u)
            if (match_left_[u] == kNil) {
                dist_[u] = 0;
                q.push(u);
            }
        bool found = false;
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v : adj_[u]) {
                const std::size_t w = match_right_[v];
                if (w == kNil) {
                    found = true;
                } else if (dist_[w] == kNil) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    }

    // Iterative DFS along the BFS layering; recursion depth could reach the graph size.
    bool dfs(std::size_t root) {
        struct Frame {
            std::size_t u;
            std::size_t next;
        };
        std::vector<Frame> stack{{root, 0}};
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next == adj_[f.u].size()) {
                dist_[f.u] = kNil;
                stack.pop_back();
                continue;
            }
            const std::size_t v = adj_[f.u][f.next++];
            const std::size_t w = match_right_[v];
            if (w == kNil) {
                // augment along the stack
                std::size_t right = v;
                for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                    const std::size_t prev = match_left_[it->u];
                    match_left_[it->u] = right;
                    match_right_[right] = it->u;
                    right = prev;
                }
                return true;
            }
            if (dist_[w] == dist_[f.u] + 1) stack.push_back({w, 0});
        }
        return false;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_left_;
    std::vector<std::size_t> match_right_;
    std::vector<std::size_t> dist_;
};

} // namespace mph
