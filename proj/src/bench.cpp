#include "wincc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wincc {

namespace {

// Saturation value for "can emit arbitrarily many labels before finishing".
constexpr std::uint32_t kPumped = UINT32_MAX / 2;
constexpr std::uint32_t kNoFinish = UINT32_MAX;

// Draws derived from raw mt19937_64 output so results do not depend on a
// standard library's distribution implementations.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;  // slight modulo bias, irrelevant at these ranges
}

std::vector<std::string> net_alphabet(const ProcessNet& net) {
  std::vector<std::string> labels;
  labels.reserve(net.label_count());
  for (LabelIdx l = 0; l < net.label_count(); ++l)
    labels.push_back(net.label_name(l));
  return labels;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NoiseProfile NoiseProfile::level(double lvl, std::uint64_t seed,
                                 std::vector<std::string> pool) {
  NoiseProfile p;
  p.p_insert = lvl / 3.0;
  p.p_delete = lvl / 3.0;
  p.p_swap = lvl / 3.0;
  p.seed = seed;
  p.insert_pool = std::move(pool);
  return p;
}

Trace inject_noise(const Trace& trace, const NoiseProfile& profile) {
  for (double p : {profile.p_insert, profile.p_delete, profile.p_swap})
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("noise probabilities must lie in [0, 1]");

  std::mt19937_64 rng(profile.seed);
  const bool can_insert = !profile.insert_pool.empty();
  Trace out;
  out.case_id = trace.case_id;

  // Always consume the draw so the stream stays aligned whether or not the
  // pool allows the insertion.
  const auto maybe_insert = [&] {
    if (unit_draw(rng) < profile.p_insert && can_insert)
      out.activities.push_back(
          profile.insert_pool[below(rng, profile.insert_pool.size())]);
  };

  const std::size_t n = trace.length();
  std::size_t i = 0;
  while (i < n) {
    maybe_insert();
    if (unit_draw(rng) < profile.p_delete) {
      ++i;
      continue;
    }
    if (i + 1 < n && unit_draw(rng) < profile.p_swap) {
      out.activities.push_back(trace.activities[i + 1]);
      out.activities.push_back(trace.activities[i]);
      i += 2;
      continue;
    }
    out.activities.push_back(trace.activities[i]);
    ++i;
  }
  maybe_insert();
  return out;
}

namespace {

// Recursive source-to-sink block construction. Exactly one token flows
// through every block, so the result is 1-safe whatever gets nested.
class NetBuilder {
 public:
  NetBuilder(const NetGenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  ProcessNet build() {
    const std::uint32_t target =
        cfg_.min_places +
        static_cast<std::uint32_t>(
            below(rng_, cfg_.max_places - cfg_.min_places + 1));
    place_budget_ = target;
    PlaceIdx source = fresh_place();
    PlaceIdx sink = fresh_place();
    block(source, sink, 3);
    // Top up short results with a tail chain so every net meets min_places.
    while (places_made_ < cfg_.min_places) {
      PlaceIdx next = fresh_place();
      labeled(sink, next);
      sink = next;
    }
    if (cfg_.require_loop && !loop_made_) labeled(sink, source);
    net_.set_initial_marking(Marking::single(source));
    net_.set_final_marking(Marking::single(sink));
    net_.validate();
    return std::move(net_);
  }

 private:
  PlaceIdx fresh_place() {
    ++places_made_;
    return net_.add_place("p" + std::to_string(next_place_++));
  }

  std::string fresh_label() {
    const std::uint32_t i = next_label_++;
    if (i < 26) return std::string(1, static_cast<char>('A' + i));
    return "T" + std::to_string(i);
  }

  TransIdx add(PlaceIdx in, PlaceIdx out, std::optional<std::string> label) {
    TransIdx t =
        net_.add_transition("t" + std::to_string(next_trans_++), std::move(label));
    net_.add_arc_pt(in, t);
    net_.add_arc_tp(t, out);
    return t;
  }

  TransIdx labeled(PlaceIdx in, PlaceIdx out) { return add(in, out, fresh_label()); }
  TransIdx silent(PlaceIdx in, PlaceIdx out) { return add(in, out, std::nullopt); }

  void block(PlaceIdx in, PlaceIdx out, int depth) {
    enum Kind { kActivity, kSequence, kChoice, kLoop };
    std::vector<Kind> options{kActivity};
    if (depth > 0) {
      if (places_made_ < place_budget_) {
        options.push_back(kSequence);
        options.push_back(kSequence);  // bias toward longer chains
      }
      options.push_back(kChoice);
      options.push_back(kLoop);
    }
    switch (options[below(rng_, options.size())]) {
      case kActivity:
        labeled(in, out);
        break;
      case kSequence: {
        PlaceIdx mid = fresh_place();
        block(in, mid, depth - 1);
        block(mid, out, depth - 1);
        break;
      }
      case kChoice: {
        const int branches = 2 + static_cast<int>(below(rng_, 2));
        for (int b = 0; b < branches; ++b) {
          if (unit_draw(rng_) < 0.15)
            silent(in, out);  // skippable branch
          else
            block(in, out, depth - 1);
        }
        break;
      }
      case kLoop: {
        block(in, out, depth - 1);
        if (unit_draw(rng_) < 0.5)
          labeled(out, in);  // observable redo
        else
          silent(out, in);
        loop_made_ = true;
        break;
      }
    }
  }

  NetGenConfig cfg_;
  std::mt19937_64 rng_;
  ProcessNet net_;
  std::uint32_t place_budget_ = 0;
  std::uint32_t places_made_ = 0;
  std::uint32_t next_place_ = 0;
  std::uint32_t next_trans_ = 0;
  std::uint32_t next_label_ = 0;
  bool loop_made_ = false;
};

}  // namespace

ProcessNet random_workflow_net(const NetGenConfig& cfg) {
  if (cfg.min_places < 2 || cfg.max_places < cfg.min_places)
    throw std::invalid_argument("place range must satisfy 2 <= min <= max");
  return NetBuilder(cfg).build();
}

TraceSimulator::TraceSimulator(const ProcessNet& net, std::size_t state_cap)
    : net_(&net), rg_(build_reachability_graph(net, state_cap)) {
  const std::optional<std::uint32_t> fin = rg_.node_of(net.final_marking());
  if (!fin)
    throw Unreachable("final marking is unreachable; nothing to simulate");
  final_node_ = *fin;
  const std::size_t count = rg_.nodes.size();

  const auto edge_weight = [&](TransIdx t) -> std::uint32_t {
    return net.transition(t).silent() ? 0 : 1;
  };

  // Fewest labeled steps to the final marking: 0/1 BFS on reversed edges.
  struct REdge {
    std::uint32_t from;
    std::uint32_t weight;
  };
  std::vector<std::vector<REdge>> reverse(count);
  for (std::uint32_t u = 0; u < count; ++u)
    for (const ReachabilityGraph::Edge& e : rg_.adjacency[u])
      reverse[e.target].push_back(REdge{u, edge_weight(e.transition)});

  min_emit_.assign(count, kNoFinish);
  std::deque<std::uint32_t> dq;
  min_emit_[final_node_] = 0;
  dq.push_back(final_node_);
  while (!dq.empty()) {
    const std::uint32_t v = dq.front();
    dq.pop_front();
    for (const REdge& e : reverse[v]) {
      const std::uint32_t cand = min_emit_[v] + e.weight;
      if (cand < min_emit_[e.from]) {
        min_emit_[e.from] = cand;
        if (e.weight == 0)
          dq.push_front(e.from);
        else
          dq.push_back(e.from);
      }
    }
  }

  // Most labeled steps to the final marking: longest path over the SCC
  // condensation. A component holding a labeled internal edge on a live path
  // can be pumped forever, so its value saturates.
  const SccPartition scc = strongly_connected_components(rg_);
  std::vector<bool> pumping(scc.component_count, false);
  std::vector<std::vector<std::uint32_t>> members(scc.component_count);
  for (std::uint32_t u = 0; u < count; ++u) {
    members[scc.component[u]].push_back(u);
    for (const ReachabilityGraph::Edge& e : rg_.adjacency[u])
      if (scc.component[e.target] == scc.component[u] &&
          edge_weight(e.transition) == 1)
        pumping[scc.component[u]] = true;
  }

  // Components are numbered in reverse topological order: all cross edges
  // point to lower ids, so ascending order sees targets before sources.
  std::vector<std::uint32_t> best(scc.component_count, kNoFinish);
  const std::uint32_t final_comp = scc.component[final_node_];
  for (std::uint32_t c = 0; c < scc.component_count; ++c) {
    std::uint32_t value = (c == final_comp) ? 0 : kNoFinish;
    for (std::uint32_t u : members[c]) {
      for (const ReachabilityGraph::Edge& e : rg_.adjacency[u]) {
        const std::uint32_t d = scc.component[e.target];
        if (d == c || best[d] == kNoFinish) continue;
        const std::uint32_t cand =
            std::min<std::uint32_t>(best[d] + edge_weight(e.transition), kPumped);
        if (value == kNoFinish || cand > value) value = cand;
      }
    }
    if (value != kNoFinish && pumping[c]) value = kPumped;
    best[c] = value;
  }

  max_emit_.resize(count);
  for (std::uint32_t u = 0; u < count; ++u) max_emit_[u] = best[scc.component[u]];
}

Trace TraceSimulator::simulate(std::size_t min_len, std::size_t max_len,
                               std::uint64_t seed) const {
  if (min_len > max_len)
    throw std::invalid_argument("min_len must not exceed max_len");
  const std::uint32_t root = rg_.root;
  if (min_emit_[root] == kNoFinish || min_emit_[root] > max_len ||
      max_emit_[root] < min_len)
    throw GenerationFailed(
        "no firing sequence emits between " + std::to_string(min_len) +
        " and " + std::to_string(max_len) + " labels");

  constexpr int kAttempts = 64;
  const std::size_t fire_cap = 4 * max_len + 64;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::uint32_t node = root;
    std::vector<std::string> emitted;
    bool done = false;
    for (std::size_t fires = 0; fires <= fire_cap; ++fires) {
      if (node == final_node_ && emitted.size() >= min_len) {
        done = true;
        break;
      }
      std::vector<const ReachabilityGraph::Edge*> feasible;
      for (const ReachabilityGraph::Edge& e : rg_.adjacency[node]) {
        const bool is_labeled = !net_->transition(e.transition).silent();
        const std::size_t after = emitted.size() + (is_labeled ? 1 : 0);
        if (min_emit_[e.target] == kNoFinish) continue;
        if (after + min_emit_[e.target] > max_len) continue;
        if (max_emit_[e.target] < kPumped &&
            after + max_emit_[e.target] < min_len)
          continue;
        feasible.push_back(&e);
      }
      if (feasible.empty()) break;
      const ReachabilityGraph::Edge* pick =
          feasible[below(rng, feasible.size())];
      const Transition& t = net_->transition(pick->transition);
      if (!t.silent()) emitted.push_back(*t.label);
      node = pick->target;
    }
    if (done) {
      Trace trace;
      trace.case_id = "sim";
      trace.activities = std::move(emitted);
      return trace;
    }
  }
  throw GenerationFailed("no random walk completed after 64 attempts");
}

Trace simulate_trace(const ProcessNet& net, std::size_t max_len,
                     std::uint64_t seed) {
  return TraceSimulator(net).simulate(0, max_len, seed);
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(const std::string& value, int line_no) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw MalformedInput("corpus spec line " + std::to_string(line_no) +
                         ": expected an integer, got '" + value + "'");
  return out;
}

double parse_double(const std::string& value, int line_no) {
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    throw MalformedInput("corpus spec line " + std::to_string(line_no) +
                         ": expected a number, got '" + value + "'");
  return out;
}

std::vector<std::uint32_t> parse_u32_list(const std::string& value, int line_no) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(static_cast<std::uint32_t>(parse_u64(trim(item), line_no)));
  if (out.empty())
    throw MalformedInput("corpus spec line " + std::to_string(line_no) +
                         ": empty list");
  return out;
}

}  // namespace

CorpusSpec parse_corpus_spec(const std::string& text) {
  CorpusSpec spec;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw MalformedInput("corpus spec line " + std::to_string(line_no) +
                           ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "nets") spec.nets = static_cast<std::uint32_t>(parse_u64(value, line_no));
    else if (key == "net_seed") spec.net_seed = parse_u64(value, line_no);
    else if (key == "min_places") spec.min_places = static_cast<std::uint32_t>(parse_u64(value, line_no));
    else if (key == "max_places") spec.max_places = static_cast<std::uint32_t>(parse_u64(value, line_no));
    else if (key == "require_loop") spec.require_loop = parse_u64(value, line_no) != 0;
    else if (key == "traces_per_net") spec.traces_per_net = static_cast<std::uint32_t>(parse_u64(value, line_no));
    else if (key == "trace_seed") spec.trace_seed = parse_u64(value, line_no);
    else if (key == "min_length") spec.min_length = parse_u64(value, line_no);
    else if (key == "max_length") spec.max_length = parse_u64(value, line_no);
    else if (key == "noise_min") spec.noise_min = parse_double(value, line_no);
    else if (key == "noise_max") spec.noise_max = parse_double(value, line_no);
    else if (key == "window_lengths") spec.window_lengths = parse_u32_list(value, line_no);
    else if (key == "beam_widths") spec.beam_widths = parse_u32_list(value, line_no);
    else if (key == "per_window_budget") spec.per_window_budget = parse_u64(value, line_no);
    else if (key == "oracle_budget") spec.oracle_budget = parse_u64(value, line_no);
    else if (key == "oracle_max_length") spec.oracle_max_length = parse_u64(value, line_no);
    else if (key == "jobs") spec.jobs = static_cast<unsigned>(parse_u64(value, line_no));
    else
      throw MalformedInput("corpus spec line " + std::to_string(line_no) +
                           ": unknown key '" + key + "'");
  }
  if (spec.min_length > spec.max_length)
    throw MalformedInput("corpus spec: min_length exceeds max_length");
  if (spec.noise_min > spec.noise_max || spec.noise_min < 0.0 ||
      spec.noise_max > 1.0)
    throw MalformedInput("corpus spec: noise range must satisfy 0 <= min <= max <= 1");
  return spec;
}

CorpusSpec parse_corpus_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_corpus_spec(buffer.str());
}

BenchAggregates compute_aggregates(const std::vector<BenchRow>& rows) {
  BenchAggregates agg;
  agg.instances = rows.size();
  std::size_t optimal = 0;
  double delta_sum = 0.0;
  double ratio_sum = 0.0;
  for (const BenchRow& row : rows) {
    if (!row.error.empty()) {
      ++agg.failed;
      continue;
    }
    if (!row.window_cost || !row.oracle_cost) continue;
    ++agg.compared;
    if (*row.window_cost == *row.oracle_cost) ++optimal;
    delta_sum += row.delta;
    ratio_sum += static_cast<double>(row.explored_window) /
                 static_cast<double>(std::max<std::size_t>(row.explored_oracle, 1));
  }
  if (agg.compared > 0) {
    agg.fraction_optimal = static_cast<double>(optimal) / agg.compared;
    agg.mean_delta = delta_sum / agg.compared;
    agg.mean_nodes_ratio = ratio_sum / agg.compared;
  }
  return agg;
}

BenchReport run_benchmark(const CorpusSpec& spec, std::ostream* progress) {
  std::vector<std::unique_ptr<ProcessNet>> nets;
  std::vector<std::unique_ptr<CheckContext>> contexts;
  std::vector<std::unique_ptr<TraceSimulator>> simulators;
  nets.reserve(spec.nets);
  for (std::uint32_t i = 0; i < spec.nets; ++i) {
    NetGenConfig gen;
    gen.min_places = spec.min_places;
    gen.max_places = spec.max_places;
    gen.require_loop = spec.require_loop;
    gen.seed = mix_seed(spec.net_seed, i);
    auto net = std::make_unique<ProcessNet>(random_workflow_net(gen));
    contexts.push_back(std::make_unique<CheckContext>(*net));
    simulators.push_back(std::make_unique<TraceSimulator>(*net));
    nets.push_back(std::move(net));
  }

  struct Instance {
    std::size_t net = 0;
    Trace trace;
    std::string id;
    std::string error;
  };
  std::vector<Instance> instances;
  instances.reserve(static_cast<std::size_t>(spec.nets) * spec.traces_per_net);
  for (std::uint32_t i = 0; i < spec.nets; ++i) {
    for (std::uint32_t j = 0; j < spec.traces_per_net; ++j) {
      Instance inst;
      inst.net = i;
      {
        std::ostringstream id;
        id << "net" << std::setw(2) << std::setfill('0') << i << "/tr"
           << std::setw(2) << std::setfill('0') << j;
        inst.id = id.str();
      }
      const std::uint64_t stream = static_cast<std::uint64_t>(i) * 100'000 + j;
      try {
        Trace fitting = simulators[i]->simulate(spec.min_length, spec.max_length,
                                                mix_seed(spec.trace_seed, stream));
        const double level =
            spec.noise_min +
            (spec.noise_max - spec.noise_min) *
                (static_cast<double>(mix_seed(spec.trace_seed ^ 0x6e01ab5ULL,
                                              stream) >>
                                     11) *
                 0x1.0p-53);
        const NoiseProfile profile = NoiseProfile::level(
            level, mix_seed(spec.trace_seed ^ 0x9042f1ULL, stream),
            net_alphabet(*nets[i]));
        inst.trace = inject_noise(fitting, profile);
        inst.trace.case_id = inst.id;
      } catch (const Error& e) {
        inst.error = e.what();
      }
      instances.push_back(std::move(inst));
    }
  }

  BenchReport report;
  report.rows.resize(instances.size() * spec.window_lengths.size() *
                     spec.beam_widths.size());
  for (std::size_t k = 0; k < instances.size(); ++k) {
    for (std::size_t li = 0; li < spec.window_lengths.size(); ++li) {
      for (std::size_t ni = 0; ni < spec.beam_widths.size(); ++ni) {
        BenchRow& row =
            report.rows[(k * spec.window_lengths.size() + li) *
                            spec.beam_widths.size() +
                        ni];
        row.instance = instances[k].id;
        row.trace_length = instances[k].trace.length();
        row.window_length = spec.window_lengths[li];
        row.beam_width = spec.beam_widths[ni];
        row.error = instances[k].error;
      }
    }
  }

  const std::size_t per_instance =
      spec.window_lengths.size() * spec.beam_widths.size();
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;

  const auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= report.rows.size()) return;
      BenchRow& row = report.rows[idx];
      if (!row.error.empty()) continue;  // generation already failed
      const Instance& inst = instances[idx / per_instance];
      const CheckContext& ctx = *contexts[inst.net];
      WindowConfig cfg;
      cfg.window_length = row.window_length;
      cfg.beam_width = row.beam_width;
      cfg.per_window_budget = spec.per_window_budget;
      try {
        row.windows =
            (inst.trace.length() + cfg.window_length - 1) / cfg.window_length;
        if (inst.trace.length() <= spec.oracle_max_length) {
          const OracleComparison cmp =
              compare_with_oracle(ctx, inst.trace, cfg, spec.oracle_budget);
          row.window_cost = cmp.window_cost;
          row.oracle_cost = cmp.optimal_cost;
          row.delta = cmp.delta;
          row.explored_window = cmp.explored_window;
          row.explored_oracle = cmp.explored_oracle;
          row.window_seconds = cmp.window_seconds;
          row.oracle_seconds = cmp.oracle_seconds;
        } else {
          const ConformanceResult result =
              window_conformance(ctx, inst.trace, cfg);
          row.window_cost = result.cost;
          row.explored_window = result.explored_nodes;
          row.window_seconds = result.wall_time.count();
          row.truncated = result.truncated;
        }
      } catch (const Error& e) {
        row.error = e.what();
      }
      if (progress) {
        const std::scoped_lock lock(progress_mutex);
        *progress << row.instance << " L=" << row.window_length
                  << " N=" << row.beam_width;
        if (!row.error.empty())
          *progress << " error: " << row.error;
        else if (row.window_cost)
          *progress << " cost=" << *row.window_cost;
        *progress << '\n';
      }
    }
  };

  unsigned jobs = spec.jobs != 0 ? spec.jobs : std::thread::hardware_concurrency();
  if (jobs == 0) jobs = 1;
  jobs = static_cast<unsigned>(
      std::min<std::size_t>(jobs, std::max<std::size_t>(report.rows.size(), 1)));
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  report.aggregates = compute_aggregates(report.rows);
  return report;
}

namespace {

std::string format_double(double value) {
  std::ostringstream out;
  out << std::setprecision(6) << value;
  return out.str();
}

}  // namespace

void write_report_csv(std::ostream& out, const BenchReport& report) {
  out << "instance,trace_length,window_length,beam_width,window_cost,"
         "oracle_cost,delta,explored_window,explored_oracle,windows,"
         "window_seconds,oracle_seconds,truncated,error\n";
  for (const BenchRow& row : report.rows) {
    out << row.instance << ',' << row.trace_length << ',' << row.window_length
        << ',' << row.beam_width << ',';
    if (row.window_cost) out << *row.window_cost;
    out << ',';
    if (row.oracle_cost) out << *row.oracle_cost;
    out << ',' << format_double(row.delta) << ',' << row.explored_window << ','
        << row.explored_oracle << ',' << row.windows << ','
        << format_double(row.window_seconds) << ','
        << format_double(row.oracle_seconds) << ','
        << (row.truncated ? 1 : 0) << ',';
    // Error text is the only free-form column; keep it comma-free.
    std::string sanitized = row.error;
    std::replace(sanitized.begin(), sanitized.end(), ',', ';');
    out << sanitized << '\n';
  }
}

void write_report_table(std::ostream& out, const BenchReport& report) {
  out << std::left << std::setw(14) << "instance" << std::right << std::setw(7)
      << "length" << std::setw(5) << "L" << std::setw(5) << "N" << std::setw(9)
      << "cost" << std::setw(9) << "optimal" << std::setw(9) << "delta%"
      << std::setw(12) << "nodes_win" << std::setw(12) << "nodes_opt"
      << std::setw(10) << "win_ms" << std::setw(10) << "opt_ms" << "  notes\n";
  for (const BenchRow& row : report.rows) {
    out << std::left << std::setw(14) << row.instance << std::right
        << std::setw(7) << row.trace_length << std::setw(5) << row.window_length
        << std::setw(5) << row.beam_width;
    if (row.window_cost)
      out << std::setw(9) << *row.window_cost;
    else
      out << std::setw(9) << "-";
    if (row.oracle_cost)
      out << std::setw(9) << *row.oracle_cost;
    else
      out << std::setw(9) << "-";
    out << std::setw(9) << format_double(row.delta * 100.0) << std::setw(12)
        << row.explored_window << std::setw(12) << row.explored_oracle
        << std::setw(10) << format_double(row.window_seconds * 1e3)
        << std::setw(10) << format_double(row.oracle_seconds * 1e3);
    out << "  ";
    if (!row.error.empty())
      out << row.error;
    else if (row.truncated)
      out << "truncated";
    out << '\n';
  }
  const BenchAggregates& agg = report.aggregates;
  out << "instances " << agg.instances << "  failed " << agg.failed
      << "  compared " << agg.compared << "  optimal "
      << format_double(agg.fraction_optimal * 100.0) << "%  mean delta "
      << format_double(agg.mean_delta * 100.0) << "%  nodes ratio "
      << format_double(agg.mean_nodes_ratio) << '\n';
}

}  // namespace wincc
