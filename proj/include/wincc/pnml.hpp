#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "wincc/petri_net.hpp"

namespace wincc {

// Reads the PNML subset used by this tool: <net>, <place> (with
// <initialMarking>), <transition> (with <name><text>), <arc>, and an
// optional <finalmarkings> section. A transition is silent when its name
// text is empty, equals "tau"/"τ", or a <toolspecific> element inside it
// carries an invisible flag (activity="$invisible$" or invisible="true").
//
// When the file has no <finalmarkings>, the returned net has no final
// marking; callers must supply one (see ProcessNet::set_final_marking).
// Throws MalformedInput with line/element context.
ProcessNet read_pnml(std::string_view bytes, std::string_view source_name);
ProcessNet read_pnml_file(const std::string& path);

// Minimal emitter, sufficient to round-trip fixtures written by this tool.
void write_pnml(std::ostream& out, const ProcessNet& net,
                std::string_view net_id = "net1");
std::string pnml_to_string(const ProcessNet& net,
                           std::string_view net_id = "net1");

// Parses the --final-marking CLI syntax "place[:count],place[:count],...".
Marking parse_marking_spec(const ProcessNet& net, std::string_view spec);

}  // namespace wincc
