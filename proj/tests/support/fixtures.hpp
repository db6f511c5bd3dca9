#pragma once

// Shared nets and trace helpers for the test suites.

#include <string>
#include <utility>
#include <vector>

#include "wincc/event_log.hpp"
#include "wincc/petri_net.hpp"

namespace testutil {

// Five-place net with an inner rework loop and a silent shortcut:
//   A: p0->p1, B: p1->p2, C: p2->p3, D: p3->p0, tau: p3->p2, E: p3->p4
// Initial [p0], final [p4]. Fitting traces: A B C E, A B C D A B C E,
// A B C C E (via tau), and so on.
inline wincc::ProcessNet loop_fixture() {
  wincc::ProcessNet net;
  const wincc::PlaceIdx p0 = net.add_place("p0");
  const wincc::PlaceIdx p1 = net.add_place("p1");
  const wincc::PlaceIdx p2 = net.add_place("p2");
  const wincc::PlaceIdx p3 = net.add_place("p3");
  const wincc::PlaceIdx p4 = net.add_place("p4");
  const wincc::TransIdx a = net.add_transition("a", "A");
  const wincc::TransIdx b = net.add_transition("b", "B");
  const wincc::TransIdx c = net.add_transition("c", "C");
  const wincc::TransIdx d = net.add_transition("d", "D");
  const wincc::TransIdx tau = net.add_transition("tau", std::nullopt);
  const wincc::TransIdx e = net.add_transition("e", "E");
  net.add_arc_pt(p0, a);
  net.add_arc_tp(a, p1);
  net.add_arc_pt(p1, b);
  net.add_arc_tp(b, p2);
  net.add_arc_pt(p2, c);
  net.add_arc_tp(c, p3);
  net.add_arc_pt(p3, d);
  net.add_arc_tp(d, p0);
  net.add_arc_pt(p3, tau);
  net.add_arc_tp(tau, p2);
  net.add_arc_pt(p3, e);
  net.add_arc_tp(e, p4);
  net.set_initial_marking(wincc::Marking::single(p0));
  net.set_final_marking(wincc::Marking::single(p4));
  net.validate();
  return net;
}

// Straight line A;B;C over four places. Initial [q0], final [q3].
inline wincc::ProcessNet sequence_fixture() {
  wincc::ProcessNet net;
  const wincc::PlaceIdx q0 = net.add_place("q0");
  const wincc::PlaceIdx q1 = net.add_place("q1");
  const wincc::PlaceIdx q2 = net.add_place("q2");
  const wincc::PlaceIdx q3 = net.add_place("q3");
  const wincc::TransIdx a = net.add_transition("a", "A");
  const wincc::TransIdx b = net.add_transition("b", "B");
  const wincc::TransIdx c = net.add_transition("c", "C");
  net.add_arc_pt(q0, a);
  net.add_arc_tp(a, q1);
  net.add_arc_pt(q1, b);
  net.add_arc_tp(b, q2);
  net.add_arc_pt(q2, c);
  net.add_arc_tp(c, q3);
  net.set_initial_marking(wincc::Marking::single(q0));
  net.set_final_marking(wincc::Marking::single(q3));
  net.validate();
  return net;
}

inline wincc::Trace make_trace(std::vector<std::string> activities,
                               std::string case_id = "t") {
  wincc::Trace trace;
  trace.case_id = std::move(case_id);
  trace.activities = std::move(activities);
  return trace;
}

// Looks up the marking for a list of place names, e.g. marking_of(net, {"p0"}).
inline wincc::Marking marking_of(const wincc::ProcessNet& net,
                                 const std::vector<std::string>& places) {
  std::vector<wincc::PlaceIdx> indices;
  for (const std::string& name : places) {
    const auto p = net.find_place(name);
    if (!p) throw std::logic_error("fixture refers to unknown place " + name);
    indices.push_back(*p);
  }
  return wincc::Marking::from_places(indices);
}

}  // namespace testutil
