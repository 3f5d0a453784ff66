// Copyright 2026 The incore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "incore/port_scheduler.h"

#include <algorithm>
#include <deque>
#include <limits>

#include "incore/errors.h"

namespace incore {
namespace {

// Dinic max-flow on exact rationals.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t n) : adj_(n), level_(n), it_(n) {}

  std::size_t AddEdge(std::size_t from, std::size_t to, Rational cap) {
    adj_[from].push_back(edges_.size());
    edges_.push_back({to, cap, Rational(0)});
    adj_[to].push_back(edges_.size());
    edges_.push_back({from, Rational(0), Rational(0)});
    return edges_.size() - 2;
  }

  Rational MaxFlow(std::size_t s, std::size_t t) {
    Rational total(0);
    while (Bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (true) {
        Rational pushed = Dfs(s, t, Rational(-1));
        if (pushed == Rational(0)) break;
        total += pushed;
      }
    }
    return total;
  }

  Rational Flow(std::size_t edge) const { return edges_[edge].flow; }

  // Nodes with a residual path to `t`.
  std::vector<bool> ReachesSink(std::size_t t) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<std::size_t> queue{t};
    seen[t] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      // An edge u->v has residual capacity iff its twin v->u's reverse does.
      for (std::size_t id : adj_[v]) {
        const Edge& twin = edges_[id ^ 1];
        std::size_t u = edges_[id].to;
        if (!seen[u] && twin.cap - twin.flow > Rational(0)) {
          seen[u] = true;
          queue.push_back(u);
        }
      }
    }
    return seen;
  }

 private:
  struct Edge {
    std::size_t to;
    Rational cap;
    Rational flow;
  };

  bool Bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<std::size_t> queue{s};
    level_[s] = 0;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t id : adj_[v]) {
        const Edge& e = edges_[id];
        if (level_[e.to] < 0 && e.cap - e.flow > Rational(0)) {
          level_[e.to] = level_[v] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  // limit < 0 means unbounded.
  Rational Dfs(std::size_t v, std::size_t t, Rational limit) {
    if (v == t) return limit;
    for (std::size_t& i = it_[v]; i < adj_[v].size(); ++i) {
      std::size_t id = adj_[v][i];
      Edge& e = edges_[id];
      Rational residual = e.cap - e.flow;
      if (level_[e.to] != level_[v] + 1 || residual <= Rational(0)) continue;
      Rational want = limit < Rational(0) ? residual : std::min(limit, residual);
      Rational got = Dfs(e.to, t, want);
      if (got > Rational(0)) {
        e.flow += got;
        edges_[id ^ 1].flow -= got;
        return got;
      }
    }
    return Rational(0);
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

// Network over the live µ-ops and ports with port capacity `t`.
// Node layout: source, sink, µ-ops, ports.
struct Built {
  FlowNetwork net;
  std::vector<std::size_t> uop_edges;  // per (live uop, eligible port)
  std::vector<std::pair<std::size_t, std::size_t>> uop_edge_ends;  // (uop, port)
};

Built BuildNetwork(const std::vector<UopDemand>& uops, const std::vector<bool>& live_uop,
                   const std::vector<bool>& live_port, const Rational& t,
                   const Rational& big) {
  std::size_t n_u = uops.size();
  std::size_t n_p = live_port.size();
  Built b{FlowNetwork(2 + n_u + n_p), {}, {}};
  for (std::size_t u = 0; u < n_u; ++u) {
    if (!live_uop[u]) continue;
    b.net.AddEdge(0, 2 + u, uops[u].occupancy);
    for (std::size_t p : uops[u].ports) {
      if (!live_port[p]) continue;
      b.uop_edges.push_back(b.net.AddEdge(2 + u, 2 + n_u + p, big));
      b.uop_edge_ends.emplace_back(u, p);
    }
  }
  for (std::size_t p = 0; p < n_p; ++p) {
    if (live_port[p]) b.net.AddEdge(2 + n_u + p, 1, t);
  }
  return b;
}

}  // namespace

Schedule MinMaxAssign(const std::vector<UopDemand>& uops, std::size_t num_ports) {
  Schedule out;
  out.port_load.assign(num_ports, Rational(0));
  out.shares.resize(uops.size());
  Rational big(1);
  for (const auto& u : uops) {
    if (u.ports.empty()) throw InternalError("µ-op without eligible ports");
    if (u.occupancy <= Rational(0)) throw InternalError("µ-op occupancy must be positive");
    for (std::size_t p : u.ports) {
      if (p >= num_ports) throw InternalError("µ-op port index out of range");
    }
    big += u.occupancy;
  }

  std::vector<bool> live_uop(uops.size(), true);
  std::vector<bool> live_port(num_ports, true);
  std::size_t n_live = uops.size();
  std::size_t n_u = uops.size();

  // Peel off the densest µ-op set level by level. Within a level every port
  // carries exactly the level's density.
  while (n_live > 0) {
    Rational demand(0);
    std::vector<bool> reach(num_ports, false);
    for (std::size_t u = 0; u < n_u; ++u) {
      if (!live_uop[u]) continue;
      demand += uops[u].occupancy;
      for (std::size_t p : uops[u].ports) {
        if (live_port[p]) reach[p] = true;
      }
    }
    auto count = static_cast<std::int64_t>(std::count(reach.begin(), reach.end(), true));
    if (count == 0) throw InternalError("µ-op lost all eligible ports");
    Rational t = demand / count;

    // Dinkelbach: raise t to the density of the violated set until feasible.
    while (true) {
      Built b = BuildNetwork(uops, live_uop, live_port, t, big);
      Rational flow = b.net.MaxFlow(0, 1);
      std::vector<bool> to_sink = b.net.ReachesSink(1);
      if (flow == demand) {
        // Maximal tight set: nodes that cannot reach the sink.
        std::vector<std::size_t> level_uops;
        for (std::size_t u = 0; u < n_u; ++u) {
          if (live_uop[u] && !to_sink[2 + u]) level_uops.push_back(u);
        }
        if (level_uops.empty()) throw InternalError("empty tight set");
        for (std::size_t k = 0; k < b.uop_edges.size(); ++k) {
          auto [u, p] = b.uop_edge_ends[k];
          if (to_sink[2 + u]) continue;
          Rational f = b.net.Flow(b.uop_edges[k]);
          if (f > Rational(0)) out.shares[u].push_back({p, f / uops[u].occupancy});
        }
        for (std::size_t p = 0; p < num_ports; ++p) {
          if (live_port[p] && !to_sink[2 + n_u + p]) {
            out.port_load[p] = t;
            live_port[p] = false;
          }
        }
        for (std::size_t u : level_uops) {
          live_uop[u] = false;
          --n_live;
        }
        out.t = std::max(out.t, t);
        break;
      }
      // Source side of the minimum cut.
      Rational load(0);
      std::int64_t ports = 0;
      for (std::size_t u = 0; u < n_u; ++u) {
        if (live_uop[u] && !to_sink[2 + u]) load += uops[u].occupancy;
      }
      for (std::size_t p = 0; p < num_ports; ++p) {
        if (live_port[p] && !to_sink[2 + n_u + p]) ++ports;
      }
      if (ports == 0) throw InternalError("min cut without ports");
      Rational next = load / ports;
      if (next <= t) throw InternalError("density iteration stalled");
      t = next;
    }
  }
  for (auto& s : out.shares) {
    std::sort(s.begin(), s.end(), [](const PortShare& a, const PortShare& b) {
      return a.port < b.port;
    });
  }
  return out;
}

PortPressureResult PortPressure(const KernelIR& kernel, const MachineModel& model) {
  std::vector<UopDemand> demands;
  std::vector<std::pair<std::size_t, std::size_t>> owner;
  for (std::size_t i = 0; i < kernel.instructions.size(); ++i) {
    const InstructionDescriptor& d = Lookup(model, kernel.instructions[i]);
    for (std::size_t k = 0; k < d.uops.size(); ++k) {
      demands.push_back({d.uops[k].ports, d.uops[k].occupancy});
      owner.emplace_back(i, k);
    }
  }
  Schedule s = MinMaxAssign(demands, model.ports.size());
  PortPressureResult r;
  r.ports = model.ports;
  r.per_port_load = std::move(s.port_load);
  r.t_port = s.t;
  for (std::size_t k = 0; k < owner.size(); ++k) r.assignment[owner[k]] = std::move(s.shares[k]);
  return r;
}

Rational IssueBound(const KernelIR& kernel, const MachineModel& model) {
  std::int64_t n = 0;
  for (const auto& instr : kernel.instructions) {
    n += static_cast<std::int64_t>(Lookup(model, instr).uops.size());
  }
  if (model.issue_width <= 0) throw InternalError("issue width must be positive");
  return Rational(n, model.issue_width);
}

Rational ReciprocalThroughput(const InstructionDescriptor& d, const MachineModel& model) {
  std::vector<UopDemand> demands;
  for (const auto& u : d.uops) demands.push_back({u.ports, u.occupancy});
  Rational port = MinMaxAssign(demands, model.ports.size()).t;
  Rational issue(static_cast<std::int64_t>(d.uops.size()), model.issue_width);
  return std::max(port, issue);
}

}  // namespace incore
