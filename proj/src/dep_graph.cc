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

#include "incore/dep_graph.h"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "incore/errors.h"

namespace incore {
namespace {

struct Access {
  std::string reg;
  bool fp = false;
  int latency = 0;  // writes only
};

bool Ignored(const std::string& reg) {
  return reg.empty() || reg == "xzr" || reg == "rip";
}

bool IsFpClass(RegClass c) {
  return c == RegClass::kScalarFp || c == RegClass::kVector;
}

bool IsRegisterText(const std::string& text) {
  return !text.empty() && text.front() != '#' && text.front() != '$';
}

std::string MemKey(const Operand& o) {
  return o.canonical_base + "|" + o.canonical_index + "|" + o.displacement + "|" +
         o.extend + "|" + (o.vector_index ? "v" : "");
}

void CollectAccesses(const InstructionInstance& in, const InstructionDescriptor& d,
                     const MachineModel& model, Dialect dialect,
                     std::vector<Access>* reads, std::vector<Access>* writes) {
  for (const auto& o : in.operands) {
    if (o.kind == OperandKind::kRegister || o.kind == OperandKind::kPredicate) {
      bool fp = IsFpClass(o.reg_class);
      if (o.read && !Ignored(o.canonical)) reads->push_back({o.canonical, fp, 0});
      if (o.written && !Ignored(o.canonical)) {
        writes->push_back({o.canonical, fp, d.latency});
      }
    } else if (o.kind == OperandKind::kMemory) {
      if (!Ignored(o.canonical_base)) reads->push_back({o.canonical_base, false, 0});
      if (!Ignored(o.canonical_index)) {
        reads->push_back({o.canonical_index, o.vector_index, 0});
      }
      if (IsRegisterText(o.post_index)) {
        // "x2" style register post-increment
        std::string canon = CanonicalRegister(o.post_index, dialect);
        if (!Ignored(canon)) reads->push_back({canon, false, 0});
      }
      if ((o.pre_index || !o.post_index.empty()) && !Ignored(o.canonical_base)) {
        writes->push_back({o.canonical_base, false, model.address_update_latency});
      }
    }
  }
  for (const auto& r : in.implicit_reads) reads->push_back({r, false, 0});
  for (const auto& w : in.implicit_writes) writes->push_back({w, false, d.latency});
}

// Registers written anywhere in the body.
std::set<std::string> WrittenRegisters(const std::vector<std::vector<Access>>& writes) {
  std::set<std::string> out;
  for (const auto& ws : writes) {
    for (const auto& w : ws) out.insert(w.reg);
  }
  return out;
}

}  // namespace

DependencyGraph BuildGraph(const KernelIR& kernel, const MachineModel& model) {
  DependencyGraph g;
  const std::size_t n = kernel.instructions.size();
  g.num_nodes = n;
  std::vector<const InstructionDescriptor*> desc(n);
  std::vector<std::vector<Access>> reads(n), writes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& in = kernel.instructions[i];
    desc[i] = &Lookup(model, in);
    g.latency.push_back(desc[i]->latency);
    g.is_store.push_back(in.WritesMemory());
    CollectAccesses(in, *desc[i], model, kernel.dialect, &reads[i], &writes[i]);
  }

  // (from, to, cross) -> edge; parallel dependencies keep the largest latency.
  std::map<std::tuple<std::size_t, std::size_t, bool>, DepEdge> edges;
  auto add = [&](std::size_t from, std::size_t to, int lat, bool cross,
                 const std::string& via, bool fp) {
    auto key = std::make_tuple(from, to, cross);
    auto it = edges.find(key);
    if (it == edges.end()) {
      edges.emplace(key, DepEdge{from, to, lat, cross, via, fp});
    } else if (lat > it->second.latency) {
      it->second = DepEdge{from, to, lat, cross, via, fp};
    }
  };

  struct Writer {
    std::size_t node;
    int latency;
    bool fp;
  };
  std::map<std::string, Writer> last;
  std::vector<std::pair<std::size_t, Access>> exposed;
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& r : reads[j]) {
      auto it = last.find(r.reg);
      if (it != last.end()) {
        add(it->second.node, j, it->second.latency, false, r.reg, it->second.fp || r.fp);
      } else {
        exposed.emplace_back(j, r);
      }
    }
    for (const auto& w : writes[j]) {
      auto it = last.find(w.reg);
      // A register written twice by one instruction keeps the slower result.
      if (it != last.end() && it->second.node == j) {
        it->second.latency = std::max(it->second.latency, w.latency);
      } else {
        last.insert_or_assign(w.reg, Writer{j, w.latency, w.fp});
      }
    }
  }
  for (const auto& [j, r] : exposed) {
    auto it = last.find(r.reg);
    if (it != last.end()) {
      add(it->second.node, j, it->second.latency, true, r.reg, it->second.fp || r.fp);
    }
  }

  // Memory: identical address syntax through registers the loop never
  // changes (otherwise the same text names different addresses).
  std::set<std::string> modified = WrittenRegisters(writes);
  auto stable = [&](const Operand& o) {
    return !o.pre_index && o.post_index.empty() && !o.vector_index &&
           !modified.count(o.canonical_base) && !modified.count(o.canonical_index);
  };
  std::map<std::string, std::size_t> last_store;
  std::vector<std::pair<std::size_t, std::string>> exposed_loads;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& in = kernel.instructions[j];
    for (const auto& o : in.operands) {
      if (o.kind != OperandKind::kMemory || !o.read || !stable(o)) continue;
      std::string key = MemKey(o);
      int lat = model.store_forward_latency > 0 ? model.store_forward_latency
                                                : desc[j]->latency;
      if (auto it = last_store.find(key); it != last_store.end()) {
        add(it->second, j, lat, false, "mem", false);
      } else {
        exposed_loads.emplace_back(j, key);
      }
    }
    for (const auto& o : in.operands) {
      if (o.kind == OperandKind::kMemory && o.written && stable(o)) last_store[MemKey(o)] = j;
    }
  }
  for (const auto& [j, key] : exposed_loads) {
    if (auto it = last_store.find(key); it != last_store.end()) {
      int lat = model.store_forward_latency > 0 ? model.store_forward_latency
                                                : desc[j]->latency;
      add(it->second, j, lat, true, "mem", false);
    }
  }

  for (auto& [key, e] : edges) {
    (e.cross ? g.cross : g.intra).push_back(e);
  }
  return g;
}

int CriticalPath(const DependencyGraph& g) {
  std::vector<int> dist(g.num_nodes, 0);
  std::vector<std::vector<const DepEdge*>> in(g.num_nodes);
  for (const auto& e : g.intra) {
    if (e.from >= e.to || e.to >= g.num_nodes) {
      throw InternalError("intra-iteration edge " + std::to_string(e.from) + " -> " +
                          std::to_string(e.to) + " is not in program order");
    }
    in[e.to].push_back(&e);
  }
  int best = 0;
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    for (const DepEdge* e : in[v]) dist[v] = std::max(dist[v], dist[e->from] + e->latency);
    int own = g.is_store[v] ? 0 : g.latency[v];
    best = std::max(best, dist[v] + own);
  }
  return best;
}

LatencyResult LoopCarried(const DependencyGraph& g, std::size_t cycle_limit) {
  LatencyResult res;
  res.critical_path = CriticalPath(g);
  const std::size_t n = g.num_nodes;
  if (g.cross.empty()) return res;

  std::vector<std::vector<std::size_t>> adj(n);
  std::map<std::pair<std::size_t, std::size_t>, const DepEdge*> edge_of;
  for (const auto* list : {&g.intra, &g.cross}) {
    for (const auto& e : *list) {
      adj[e.from].push_back(e.to);
      edge_of[{e.from, e.to}] = &e;
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  auto score = [&](const std::vector<std::size_t>& cyc) {
    std::int64_t sum = 0;
    std::int64_t spans = 0;
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const DepEdge* e = edge_of.at({cyc[k], cyc[(k + 1) % cyc.size()]});
      sum += e->latency;
      spans += e->cross ? 1 : 0;
    }
    if (spans == 0) throw InternalError("dependency cycle without a back edge");
    return Rational(sum, spans);
  };

  bool stop = false;
  auto record = [&](const std::vector<std::size_t>& cyc) {
    if (res.cycles_examined >= cycle_limit) {
      res.truncated = true;
      stop = true;
      return;
    }
    ++res.cycles_examined;
    Rational v = score(cyc);
    if (res.lcd_cycles.empty() || v > res.lcd) {
      res.lcd = v;
      res.lcd_cycles = {cyc};
    } else if (v == res.lcd) {
      res.lcd_cycles.push_back(cyc);
    }
  };

  // Johnson's elementary-circuit enumeration, least vertex first.
  std::vector<bool> blocked(n), in_scc(n);
  std::vector<std::set<std::size_t>> bmap(n);
  std::vector<std::size_t> stack;
  std::function<void(std::size_t)> unblock = [&](std::size_t u) {
    blocked[u] = false;
    auto pending = std::move(bmap[u]);
    bmap[u].clear();
    for (std::size_t w : pending) {
      if (blocked[w]) unblock(w);
    }
  };
  std::function<bool(std::size_t, std::size_t)> circuit = [&](std::size_t v,
                                                              std::size_t s) -> bool {
    bool found = false;
    stack.push_back(v);
    blocked[v] = true;
    for (std::size_t w : adj[v]) {
      if (stop) break;
      if (!in_scc[w]) continue;
      if (w == s) {
        record(stack);
        found = true;
      } else if (!blocked[w]) {
        if (circuit(w, s)) found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (std::size_t w : adj[v]) {
        if (in_scc[w]) bmap[w].insert(v);
      }
    }
    stack.pop_back();
    return found;
  };

  for (std::size_t s = 0; s < n && !stop; ++s) {
    // Strongly connected component of s within nodes >= s.
    auto reach = [&](bool forward) {
      std::vector<bool> seen(n, false);
      std::vector<std::size_t> todo{s};
      seen[s] = true;
      while (!todo.empty()) {
        std::size_t v = todo.back();
        todo.pop_back();
        if (forward) {
          for (std::size_t w : adj[v]) {
            if (w >= s && !seen[w]) {
              seen[w] = true;
              todo.push_back(w);
            }
          }
        } else {
          for (std::size_t u = s; u < n; ++u) {
            if (!seen[u] && std::binary_search(adj[u].begin(), adj[u].end(), v)) {
              seen[u] = true;
              todo.push_back(u);
            }
          }
        }
      }
      return seen;
    };
    auto fwd = reach(true);
    auto bwd = reach(false);
    std::size_t size = 0;
    for (std::size_t v = 0; v < n; ++v) {
      in_scc[v] = fwd[v] && bwd[v];
      size += in_scc[v] ? 1 : 0;
      blocked[v] = false;
      bmap[v].clear();
    }
    bool self_loop = std::binary_search(adj[s].begin(), adj[s].end(), s);
    if (size == 1 && !self_loop) continue;
    circuit(s, s);
  }
  std::sort(res.lcd_cycles.begin(), res.lcd_cycles.end());
  return res;
}

std::string DumpDeps(const DependencyGraph& g) {
  std::vector<DepEdge> all = g.intra;
  all.insert(all.end(), g.cross.begin(), g.cross.end());
  std::sort(all.begin(), all.end(), [](const DepEdge& a, const DepEdge& b) {
    return std::tie(a.from, a.to, a.cross) < std::tie(b.from, b.to, b.cross);
  });
  std::ostringstream out;
  for (const auto& e : all) {
    out << e.from << " -> " << e.to << " : " << e.latency;
    if (e.cross) out << " (cross)";
    out << "\n";
  }
  return out.str();
}

}  // namespace incore
