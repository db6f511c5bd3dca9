#include "wincc/pnml.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "wincc/xml_reader.hpp"

namespace wincc {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct RawPlace {
  std::string id;
  std::uint32_t initial_tokens = 0;
};

struct RawTransition {
  std::string id;
  std::string name_text;
  bool invisible_flag = false;
};

struct RawArc {
  std::string id, source, target;
};

// Accumulates the document, then assembles the net once parsing is done so
// arcs may precede their endpoints in the file.
class PnmlHandler : public XmlHandler {
 public:
  explicit PnmlHandler(std::string_view source) : source_(source) {}

  void on_start(std::string_view name, const std::vector<Attr>& attrs) override {
    path_.emplace_back(name);
    text_.clear();
    if (name == "place" && !in_final_markings_) {
      current_place_ = RawPlace{attr_or(attrs, "id", "place"), 0};
    } else if (name == "transition") {
      current_transition_ = RawTransition{attr_or(attrs, "id", "transition"), "", false};
    } else if (name == "arc") {
      arcs_.push_back(RawArc{std::string(attr(attrs, "id").value_or("")),
                             attr_or(attrs, "source", "arc"),
                             attr_or(attrs, "target", "arc")});
    } else if (name == "finalmarkings") {
      in_final_markings_ = true;
    } else if (name == "marking" && in_final_markings_) {
      final_markings_.emplace_back();
    } else if (name == "place" && in_final_markings_) {
      auto idref = attr(attrs, "idref");
      if (!idref) throw MalformedInput(source_ + ": <place> inside <finalmarkings> lacks idref");
      final_place_ref_ = std::string(*idref);
    } else if (name == "toolspecific" && current_transition_) {
      for (const auto& [k, v] : attrs) {
        if ((k == "activity" && v == "$invisible$") ||
            (k == "invisible" && (v == "true" || v == "1")))
          current_transition_->invisible_flag = true;
      }
    }
  }

  void on_text(std::string_view text) override { text_.append(text); }

  void on_end(std::string_view name) override {
    if (name == "text") {
      std::string value = trimmed(text_);
      if (in_final_markings_) {
        if (!final_markings_.empty() && final_place_ref_)
          add_final_tokens(value);
      } else if (enclosing_is("initialMarking") && current_place_) {
        current_place_->initial_tokens = parse_count(value, "initialMarking");
      } else if (enclosing_is("name") && current_transition_) {
        current_transition_->name_text = value;
      }
    } else if (name == "place") {
      if (in_final_markings_) {
        final_place_ref_.reset();
      } else if (current_place_) {
        places_.push_back(*current_place_);
        current_place_.reset();
      }
    } else if (name == "transition") {
      if (current_transition_) {
        transitions_.push_back(*current_transition_);
        current_transition_.reset();
      }
    } else if (name == "finalmarkings") {
      in_final_markings_ = false;
    }
    text_.clear();
    if (!path_.empty()) path_.pop_back();
  }

  ProcessNet build() {
    ProcessNet net;
    if (places_.empty() && transitions_.empty())
      throw MalformedInput(source_ + ": no <place> or <transition> elements found");
    std::vector<Marking::Entry> initial;
    for (const RawPlace& p : places_) {
      PlaceIdx idx = net.add_place(p.id);
      if (p.initial_tokens > 0) initial.emplace_back(idx, p.initial_tokens);
    }
    for (const RawTransition& t : transitions_) {
      std::optional<std::string> label;
      bool silent = t.invisible_flag || t.name_text.empty() ||
                    t.name_text == "tau" || t.name_text == "\xcf\x84";
      if (!silent) label = t.name_text;
      net.add_transition(t.id, std::move(label));
    }
    for (const RawArc& a : arcs_) {
      try {
        net.add_arc(a.source, a.target);
      } catch (const MalformedInput& e) {
        throw MalformedInput(source_ + ": <arc id=\"" + a.id + "\">: " + e.what());
      }
    }
    net.set_initial_marking(Marking(std::move(initial)));
    if (!final_markings_.empty()) {
      std::vector<Marking::Entry> entries;
      for (const auto& [place, count] : final_markings_.front()) {
        auto idx = net.find_place(place);
        if (!idx)
          throw MalformedInput(source_ + ": <finalmarkings> references unknown place '" + place + "'");
        entries.emplace_back(*idx, count);
      }
      net.set_final_marking(Marking(std::move(entries)));
    }
    return net;
  }

 private:
  static std::optional<std::string_view> attr(const std::vector<Attr>& attrs,
                                              std::string_view key) {
    for (const auto& [k, v] : attrs)
      if (k == key) return v;
    return std::nullopt;
  }

  std::string attr_or(const std::vector<Attr>& attrs, std::string_view key,
                      std::string_view element) const {
    auto v = attr(attrs, key);
    if (!v)
      throw MalformedInput(source_ + ": <" + std::string(element) +
                           "> element lacks required attribute '" + std::string(key) + "'");
    return std::string(*v);
  }

  bool enclosing_is(std::string_view name) const {
    // path_ currently ends with "text"; look one level up.
    return path_.size() >= 2 && path_[path_.size() - 2] == name;
  }

  std::uint32_t parse_count(const std::string& value, std::string_view where) const {
    // Some exporters write "p0,1" inside marking text; take the part after a comma.
    std::string digits = value;
    if (auto comma = digits.find_last_of(','); comma != std::string::npos)
      digits = trimmed(digits.substr(comma + 1));
    std::uint32_t out = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      throw MalformedInput(source_ + ": <" + std::string(where) +
                           "> text '" + value + "' is not a token count");
    return out;
  }

  void add_final_tokens(const std::string& value) {
    std::uint32_t count = value.empty() ? 1 : parse_count(value, "finalmarkings");
    if (count > 0) final_markings_.back().emplace_back(*final_place_ref_, count);
  }

  std::string source_;
  std::vector<std::string> path_;
  std::string text_;
  std::optional<RawPlace> current_place_;
  std::optional<RawTransition> current_transition_;
  std::optional<std::string> final_place_ref_;
  bool in_final_markings_ = false;
  std::vector<RawPlace> places_;
  std::vector<RawTransition> transitions_;
  std::vector<RawArc> arcs_;
  std::vector<std::vector<std::pair<std::string, std::uint32_t>>> final_markings_;
};

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

ProcessNet read_pnml(std::string_view bytes, std::string_view source_name) {
  PnmlHandler handler(source_name);
  parse_xml(bytes, handler, source_name);
  return handler.build();
}

ProcessNet read_pnml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_pnml(buffer.str(), path);
}

void write_pnml(std::ostream& out, const ProcessNet& net,
                std::string_view net_id) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<pnml>\n  <net id=\"" << xml_escape(net_id)
      << "\" type=\"http://www.pnml.org/version-2009/grammar/pnmlcoremodel\">\n";
  for (PlaceIdx p = 0; p < net.place_count(); ++p) {
    out << "    <place id=\"" << xml_escape(net.place_id(p)) << "\">";
    if (std::uint32_t tokens = net.initial_marking().count_of(p); tokens > 0)
      out << "<initialMarking><text>" << tokens << "</text></initialMarking>";
    out << "</place>\n";
  }
  for (TransIdx t = 0; t < net.transitions().size(); ++t) {
    const Transition& trans = net.transition(t);
    out << "    <transition id=\"" << xml_escape(trans.id) << "\">";
    if (!trans.silent())
      out << "<name><text>" << xml_escape(*trans.label) << "</text></name>";
    out << "</transition>\n";
  }
  std::size_t arc = 0;
  for (TransIdx t = 0; t < net.transitions().size(); ++t) {
    for (PlaceIdx p : net.transition(t).inputs)
      out << "    <arc id=\"a" << arc++ << "\" source=\"" << xml_escape(net.place_id(p))
          << "\" target=\"" << xml_escape(net.transition(t).id) << "\"/>\n";
    for (PlaceIdx p : net.transition(t).outputs)
      out << "    <arc id=\"a" << arc++ << "\" source=\"" << xml_escape(net.transition(t).id)
          << "\" target=\"" << xml_escape(net.place_id(p)) << "\"/>\n";
  }
  if (net.has_final_marking()) {
    out << "    <finalmarkings><marking>\n";
    for (const auto& [place, count] : net.final_marking().entries())
      out << "      <place idref=\"" << xml_escape(net.place_id(place))
          << "\"><text>" << count << "</text></place>\n";
    out << "    </marking></finalmarkings>\n";
  }
  out << "  </net>\n</pnml>\n";
}

std::string pnml_to_string(const ProcessNet& net, std::string_view net_id) {
  std::ostringstream out;
  write_pnml(out, net, net_id);
  return out.str();
}

Marking parse_marking_spec(const ProcessNet& net, std::string_view spec) {
  std::vector<Marking::Entry> entries;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string_view::npos) comma = spec.size();
    std::string_view item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    std::string_view place = item;
    std::uint32_t count = 1;
    if (std::size_t colon = item.find(':'); colon != std::string_view::npos) {
      place = item.substr(0, colon);
      std::string_view count_str = item.substr(colon + 1);
      auto [ptr, ec] = std::from_chars(count_str.data(), count_str.data() + count_str.size(), count);
      if (ec != std::errc() || ptr != count_str.data() + count_str.size())
        throw MalformedInput("bad token count in marking spec: '" + std::string(item) + "'");
    }
    auto idx = net.find_place(std::string(place));
    if (!idx)
      throw MalformedInput("marking spec names unknown place '" + std::string(place) + "'");
    entries.emplace_back(*idx, count);
  }
  return Marking(std::move(entries));
}

}  // namespace wincc
