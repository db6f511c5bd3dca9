// Acceptance gate: six numbered scenarios, each printing exactly one
// [PASS]/[FAIL] line with its headline numbers and wall time. Run as
//   acceptance --criterion <1..6>
// The exit code is 0 only when the criterion holds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/brute_force.hpp"
#include "support/fixtures.hpp"
#include "wincc/alignment.hpp"
#include "wincc/bench.hpp"
#include "wincc/event_log.hpp"
#include "wincc/petri_net.hpp"
#include "wincc/reachability.hpp"
#include "wincc/sliding_window.hpp"

using namespace wincc;
using testutil::loop_fixture;
using testutil::make_trace;
using testutil::marking_of;

namespace {

std::vector<std::string> problems;
std::string headline;

void expect(bool ok, const std::string& what) {
  if (!ok) problems.push_back(what);
}

std::string fmt(double value, int digits = 2) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::vector<std::string> alphabet_of(const ProcessNet& net) {
  std::vector<std::string> labels;
  for (LabelIdx l = 0; l < net.label_count(); ++l)
    labels.push_back(net.label_name(l));
  return labels;
}

// Replays an alignment move by move against the net, checking firing
// legality, the log projection, cost accounting, and the final marking.
bool replays_cleanly(const ProcessNet& net, const Trace& trace,
                     const Alignment& alignment, Cost expected_cost) {
  Marking marking = net.initial_marking();
  std::uint32_t pos = 0;
  Cost cost = 0;
  for (const Move& move : alignment.moves) {
    switch (move.kind) {
      case MoveKind::Sync: {
        if (move.transition == kNoTransition || move.trace_index != pos)
          return false;
        const Transition& t = net.transition(move.transition);
        if (!t.label || *t.label != trace.activities[pos]) return false;
        if (!is_enabled(net, marking, move.transition)) return false;
        marking = fire(net, marking, move.transition);
        ++pos;
        break;
      }
      case MoveKind::Model: {
        if (move.transition == kNoTransition ||
            move.trace_index != kNoTraceIndex)
          return false;
        if (!is_enabled(net, marking, move.transition)) return false;
        marking = fire(net, marking, move.transition);
        break;
      }
      case MoveKind::Log: {
        if (move.transition != kNoTransition || move.trace_index != pos)
          return false;
        ++pos;
        break;
      }
    }
    cost += move_cost(net, move);
  }
  return pos == trace.length() && cost == expected_cost &&
         cost == alignment.cost && marking == net.final_marking() &&
         alignment.final_marking == net.final_marking() &&
         alignment.trace_progress == trace.length();
}

// --------------------------------------------------------------------------
// 1. Golden walkthrough: fixed net, fixed trace, fixed beams, cost 2.

void criterion_1() {
  const ProcessNet net = loop_fixture();
  const CheckContext ctx(net);
  const Trace trace =
      make_trace({"A", "B", "D", "C", "C", "E", "C", "C", "E"});
  WindowConfig cfg;
  cfg.window_length = 3;
  cfg.beam_width = 2;
  cfg.record_windows = true;
  const ConformanceResult result = window_conformance(ctx, trace, cfg);

  expect(result.cost == 2,
         "cost " + std::to_string(result.cost) + ", want 2");
  expect(result.windows == 3,
         "windows " + std::to_string(result.windows) + ", want 3");
  expect(replays_cleanly(net, trace, result.alignment, result.cost),
         "alignment does not replay");

  const auto kept_set = [&](std::size_t w) {
    std::multiset<std::pair<Marking, Cost>> kept;
    if (w < result.window_details.size())
      for (const WindowCandidate& c : result.window_details[w].candidates)
        if (c.kept) kept.insert({c.marking, c.accumulated_cost});
    return kept;
  };
  const std::multiset<std::pair<Marking, Cost>> want1{
      {marking_of(net, {"p0"}), 1}, {marking_of(net, {"p2"}), 1}};
  const std::multiset<std::pair<Marking, Cost>> want2{
      {marking_of(net, {"p2"}), 2}, {marking_of(net, {"p3"}), 2}};
  expect(kept_set(0) == want1, "window-1 beam is not {[p0]:1, [p2]:1}");
  expect(kept_set(1) == want2, "window-2 beam is not {[p2]:2, [p3]:2}");

  bool p4_ranked_out = false;
  if (result.window_details.size() > 1) {
    const Marking p4 = marking_of(net, {"p4"});
    for (const WindowCandidate& c : result.window_details[1].candidates)
      if (c.marking == p4 && c.penalty == 3 && !c.kept) p4_ranked_out = true;
  }
  expect(p4_ranked_out, "[p4] goal not ranked out by penalty 3 in window 2");
  headline = "cost 2, beams and penalty ranking verified";
}

// --------------------------------------------------------------------------
// 2. Degenerate window (L = |trace|, N = 1) must equal the exact aligner.

void criterion_2() {
  std::size_t total = 0;
  std::size_t matched = 0;
  for (std::uint64_t net_i = 0; net_i < 60; ++net_i) {
    NetGenConfig gen;
    gen.min_places = 4;
    gen.max_places = 10;
    gen.require_loop = (net_i % 2) == 0;
    gen.seed = mix_seed(21, net_i);
    const ProcessNet net = random_workflow_net(gen);
    const CheckContext ctx(net);
    const TraceSimulator sim(net);
    const std::vector<std::string> pool = alphabet_of(net);
    for (std::uint64_t t = 0; t < 10; ++t) {
      const std::uint64_t stream = net_i * 100 + t;
      const Trace base = sim.simulate(0, 18, mix_seed(22, stream));
      const Trace trace = inject_noise(
          base, NoiseProfile::level(0.3, mix_seed(23, stream), pool));
      if (trace.length() > 25) continue;
      ++total;
      WindowConfig cfg;
      cfg.window_length =
          std::max<std::uint32_t>(1, static_cast<std::uint32_t>(trace.length()));
      cfg.beam_width = 1;
      const Cost window = window_conformance(ctx, trace, cfg).cost;
      const Cost exact = astar_optimal_alignment(ctx, trace).alignment.cost;
      if (window == exact) ++matched;
    }
  }
  expect(total >= 500, "only " + std::to_string(total) + " instances, want 500");
  expect(matched == total, std::to_string(total - matched) + " mismatches");
  headline = std::to_string(matched) + "/" + std::to_string(total) +
             " instances match the exact cost";
}

// --------------------------------------------------------------------------
// 3. Near-optimality on a generated corpus: >= 85% optimal, mean delta <= 5%.

void criterion_3() {
  CorpusSpec spec;
  spec.nets = 25;
  spec.net_seed = 301;
  spec.min_places = 4;
  spec.max_places = 10;
  spec.traces_per_net = 6;
  spec.trace_seed = 302;
  spec.min_length = 40;
  spec.max_length = 120;
  spec.noise_min = 0.1;
  spec.noise_max = 0.3;
  spec.window_lengths = {5, 10};
  spec.beam_widths = {3};
  spec.oracle_max_length = 1'000'000;  // always run the oracle

  const BenchReport report = run_benchmark(spec);
  expect(report.rows.size() == 300,
         std::to_string(report.rows.size()) + " rows, want 300");
  expect(report.aggregates.failed == 0,
         std::to_string(report.aggregates.failed) + " instances failed");
  expect(report.aggregates.compared == report.rows.size(),
         "oracle skipped on some instances");
  std::size_t negative = 0;
  for (const BenchRow& row : report.rows)
    if (row.window_cost && row.oracle_cost &&
        (*row.window_cost < *row.oracle_cost || row.delta < 0.0))
      ++negative;
  expect(negative == 0,
         std::to_string(negative) + " instances beat the oracle (impossible)");
  expect(report.aggregates.fraction_optimal >= 0.85,
         "fraction optimal " + fmt(report.aggregates.fraction_optimal * 100) +
             "% < 85%");
  expect(report.aggregates.mean_delta <= 0.05,
         "mean delta " + fmt(report.aggregates.mean_delta * 100) + "% > 5%");
  headline = "optimal " + fmt(report.aggregates.fraction_optimal * 100) +
             "%, mean delta " + fmt(report.aggregates.mean_delta * 100) +
             "%, " + std::to_string(report.aggregates.compared) + " instances";
}

// --------------------------------------------------------------------------
// 4. Penalty admissibility: bound <= brute-force suffix cost, everywhere.

void criterion_4() {
  std::size_t checked = 0;
  std::size_t violations = 0;
  for (std::uint64_t net_i = 0; net_i < 20; ++net_i) {
    NetGenConfig gen;
    gen.min_places = 4;
    gen.max_places = 8;
    gen.require_loop = (net_i % 2) == 0;
    gen.seed = mix_seed(41, net_i);
    const ProcessNet net = random_workflow_net(gen);
    const CheckContext ctx(net);
    std::vector<std::string> pool = alphabet_of(net);
    pool.push_back("OMEGA");  // a label the model can never produce
    std::mt19937_64 rng(mix_seed(42, net_i));

    std::vector<std::set<std::string>> labels(ctx.rg.nodes.size());
    for (std::uint32_t node = 0; node < ctx.rg.nodes.size(); ++node)
      labels[node] = ctx.reach.labels_from(node, net);

    for (int round = 0; round < 200; ++round) {
      std::vector<std::string> suffix;
      const std::size_t len = rng() % 11;
      for (std::size_t i = 0; i < len; ++i)
        suffix.push_back(pool[rng() % pool.size()]);
      const SuffixFrequency freq = suffix_frequencies(make_trace(suffix));

      const auto costs = testutil::brute_force_suffix_costs(
          net, ctx.rg.nodes, suffix, std::nullopt);
      for (std::uint32_t node = 0; node < ctx.rg.nodes.size(); ++node) {
        const Cost bound = marginal_cost_lower_bound(labels[node], freq, 0);
        ++checked;
        if (!costs[node] || bound > *costs[node]) ++violations;
      }
      if (round == 0) {
        // Cross-check the batched oracle against the one-start oracle.
        const std::uint32_t probe =
            static_cast<std::uint32_t>(rng() % ctx.rg.nodes.size());
        const auto single = testutil::brute_force_cost(
            net, ctx.rg.nodes[probe], suffix, std::nullopt);
        expect(single == costs[probe], "suffix-cost oracles disagree");
      }
    }
  }
  expect(violations == 0, std::to_string(violations) + " violations");
  headline = std::to_string(checked) + " marking/suffix pairs, " +
             std::to_string(violations) + " violations";
}

// --------------------------------------------------------------------------
// 5. Linear scaling: constant work per window, doubling input doubles both
//    total settled states and wall time (within [1.6, 2.6]).

void criterion_5() {
  const ProcessNet net = loop_fixture();
  const CheckContext ctx(net);
  const TraceSimulator sim(net);
  const std::vector<std::string> pool = alphabet_of(net);
  WindowConfig cfg;
  cfg.window_length = 10;
  cfg.beam_width = 3;

  struct Sample {
    std::size_t length = 0;
    std::size_t explored = 0;
    std::size_t windows = 0;
    double seconds = 0.0;
  };
  std::vector<Sample> samples;
  for (const std::size_t len : {1000, 2000, 4000}) {
    const Trace base = sim.simulate(len, len, mix_seed(51, len));
    const Trace trace = inject_noise(
        base, NoiseProfile::level(0.10, mix_seed(52, len), pool));
    Sample s;
    s.length = trace.length();
    // Mean wall time over enough repetitions to drown out scheduler noise.
    double total = 0.0;
    int runs = 0;
    while (runs < 5 || total < 0.5) {
      const auto start = std::chrono::steady_clock::now();
      const ConformanceResult result = window_conformance(ctx, trace, cfg);
      total += seconds_since(start);
      ++runs;
      s.explored = result.explored_nodes;
      s.windows = result.windows;
    }
    s.seconds = total / runs;
    samples.push_back(s);
  }

  double per_window_sum = 0.0;
  for (const Sample& s : samples)
    per_window_sum += static_cast<double>(s.explored) / s.windows;
  const double per_window_mean = per_window_sum / samples.size();
  for (const Sample& s : samples) {
    const double per_window = static_cast<double>(s.explored) / s.windows;
    expect(per_window >= 0.7 * per_window_mean &&
               per_window <= 1.3 * per_window_mean,
           "per-window settled states at length " + std::to_string(s.length) +
               " drift more than 30% from the mean");
  }
  std::ostringstream ratios;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double nodes_ratio = static_cast<double>(samples[i].explored) /
                               static_cast<double>(samples[i - 1].explored);
    const double time_ratio = samples[i].seconds / samples[i - 1].seconds;
    ratios << (i > 1 ? ", " : "") << "x" << fmt(nodes_ratio) << "/"
           << fmt(time_ratio, 1);
    expect(nodes_ratio >= 1.6 && nodes_ratio <= 2.6,
           "settled-states ratio " + fmt(nodes_ratio) + " outside [1.6, 2.6]");
    expect(time_ratio >= 1.6 && time_ratio <= 2.6,
           "wall-time ratio " + fmt(time_ratio) + " outside [1.6, 2.6]");
  }

  const Trace big_base = sim.simulate(5000, 5000, mix_seed(51, 5000));
  const Trace big = inject_noise(
      big_base, NoiseProfile::level(0.10, mix_seed(52, 5000), pool));
  const auto start = std::chrono::steady_clock::now();
  const ConformanceResult result = window_conformance(ctx, big, cfg);
  const double big_seconds = seconds_since(start);
  expect(big_seconds < 120.0,
         "5000-event trace took " + fmt(big_seconds) + " s");
  expect(result.cost > 0, "noisy 5000-event trace aligned at cost 0");
  headline = "per-doubling nodes/time ratios " + ratios.str() +
             ", 5000 events in " + fmt(big_seconds) + " s";
}

// --------------------------------------------------------------------------
// 6. Invariant suite: projection, beam shape, suffix recurrence, split and
//    concatenation, determinism - 1000+ random cases each.

void criterion_6() {
  std::size_t projection_cases = 0, beam_cases = 0, recurrence_cases = 0,
              split_cases = 0, determinism_cases = 0;
  std::size_t failures = 0;

  std::vector<ProcessNet> nets;
  nets.reserve(100);  // contexts keep pointers into this vector
  std::vector<std::unique_ptr<CheckContext>> contexts;
  std::vector<std::unique_ptr<TraceSimulator>> simulators;
  for (std::uint64_t i = 0; i < 100; ++i) {
    NetGenConfig gen;
    gen.min_places = 4;
    gen.max_places = 7;
    gen.require_loop = (i % 2) == 0;
    gen.seed = mix_seed(61, i);
    nets.push_back(random_workflow_net(gen));
    contexts.push_back(std::make_unique<CheckContext>(nets.back()));
    simulators.push_back(std::make_unique<TraceSimulator>(nets.back()));
  }

  const auto all_filled = [&] {
    return projection_cases >= 1000 && beam_cases >= 1000 &&
           recurrence_cases >= 1000 && split_cases >= 1000 &&
           determinism_cases >= 1000;
  };

  for (std::uint64_t iter = 0; iter < 3000 && !all_filled(); ++iter) {
    const std::size_t which = iter % nets.size();
    const ProcessNet& net = nets[which];
    const CheckContext& ctx = *contexts[which];
    const Trace base = simulators[which]->simulate(0, 16, mix_seed(62, iter));
    const Trace trace = inject_noise(
        base,
        NoiseProfile::level(0.4, mix_seed(63, iter), alphabet_of(net)));
    const std::size_t n = trace.length();

    // Suffix-frequency recurrence.
    {
      const SuffixFrequency freq = suffix_frequencies(trace);
      bool ok = freq.positions() == n + 1;
      for (std::size_t p = 0; ok && p <= n; ++p) {
        if (freq.total(p) != n - p) ok = false;
        for (const std::string& label : freq.labels()) {
          if (p == n) {
            if (freq.count(p, label) != 0) ok = false;
          } else {
            const std::uint32_t here = trace.activities[p] == label ? 1 : 0;
            if (freq.count(p, label) != freq.count(p + 1, label) + here)
              ok = false;
          }
        }
      }
      ++recurrence_cases;
      if (!ok) ++failures;
    }

    // Split/concat identity.
    {
      const std::uint32_t L = 1 + static_cast<std::uint32_t>(iter % 6);
      const auto windows = split_trace(trace, L);
      bool ok = windows.size() == (n + L - 1) / L;
      std::vector<std::string> rebuilt;
      std::uint32_t expect_start = 0;
      for (std::size_t w = 0; ok && w < windows.size(); ++w) {
        if (windows[w].window_index != w) ok = false;
        if (windows[w].start != expect_start) ok = false;
        if (windows[w].length() == 0 || windows[w].length() > L) ok = false;
        expect_start = windows[w].end;
        for (std::uint32_t p = windows[w].start; p < windows[w].end; ++p)
          rebuilt.push_back(trace.activities[p]);
      }
      if (ok && expect_start != n) ok = false;
      if (ok && rebuilt != trace.activities) ok = false;
      ++split_cases;
      if (!ok) ++failures;
    }

    // Two identical runs: determinism, beam shape, projection.
    WindowConfig cfg;
    cfg.window_length = 1 + static_cast<std::uint32_t>(iter % 5);
    cfg.beam_width = 1 + static_cast<std::uint32_t>(iter % 3);
    cfg.record_windows = true;
    const ConformanceResult r1 = window_conformance(ctx, trace, cfg);
    const ConformanceResult r2 = window_conformance(ctx, trace, cfg);

    ++determinism_cases;
    if (r1.cost != r2.cost || r1.explored_nodes != r2.explored_nodes ||
        !(r1.alignment.moves == r2.alignment.moves))
      ++failures;

    ++projection_cases;
    if (!replays_cleanly(net, trace, r1.alignment, r1.cost)) ++failures;

    if (r1.window_details.size() > 1) {
      bool ok = true;
      for (std::size_t w = 0; w + 1 < r1.window_details.size(); ++w) {
        std::set<Marking> kept;
        std::size_t kept_count = 0;
        for (const WindowCandidate& c : r1.window_details[w].candidates)
          if (c.kept) {
            ++kept_count;
            kept.insert(c.marking);
          }
        if (kept_count == 0 || kept_count > cfg.beam_width) ok = false;
        if (kept.size() != kept_count) ok = false;  // duplicates survived
      }
      ++beam_cases;
      if (!ok) ++failures;
    }
  }

  expect(all_filled(), "fewer than 1000 cases for some invariant");
  expect(failures == 0, std::to_string(failures) + " invariant failures");
  headline = std::to_string(projection_cases) + " projection, " +
             std::to_string(beam_cases) + " beam, " +
             std::to_string(recurrence_cases) + " recurrence, " +
             std::to_string(split_cases) + " split, " +
             std::to_string(determinism_cases) +
             " determinism cases, 0 failures";
}

}  // namespace

int main(int argc, char** argv) {
  int which = 0;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--criterion" && i + 1 < argc)
      which = std::atoi(argv[++i]);
  if (which < 1 || which > 6) {
    std::cerr << "usage: acceptance --criterion <1..6>\n";
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    switch (which) {
      case 1: criterion_1(); break;
      case 2: criterion_2(); break;
      case 3: criterion_3(); break;
      case 4: criterion_4(); break;
      case 5: criterion_5(); break;
      case 6: criterion_6(); break;
    }
  } catch (const std::exception& e) {
    problems.push_back(std::string("exception: ") + e.what());
  }
  const double elapsed = seconds_since(start);

  // Hard runtime ceilings for the timed scenarios (seconds).
  const double limits[] = {0, 1.0, 300.0, 600.0, 0, 0, 0};
  if (limits[which] > 0 && elapsed >= limits[which])
    problems.push_back("runtime " + fmt(elapsed) + " s exceeds " +
                       fmt(limits[which], 0) + " s");

  if (problems.empty()) {
    std::cout << "[PASS] criterion " << which << ": " << headline << " ["
              << fmt(elapsed) << "s]\n";
    return 0;
  }
  std::ostringstream joined;
  for (std::size_t i = 0; i < problems.size(); ++i)
    joined << (i ? "; " : "") << problems[i];
  std::cout << "[FAIL] criterion " << which << ": " << joined.str() << " ["
            << fmt(elapsed) << "s]\n";
  return 1;
}
