#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "wincc/errors.hpp"

namespace wincc {

// SAX-style callbacks for the expat-backed reader below. Attribute and text
// views are only valid for the duration of the call.
class XmlHandler {
 public:
  using Attr = std::pair<std::string_view, std::string_view>;

  virtual ~XmlHandler() = default;
  virtual void on_start(std::string_view name, const std::vector<Attr>& attrs) = 0;
  virtual void on_end(std::string_view name) = 0;
  virtual void on_text(std::string_view text) {}
};

// Parses the whole buffer; throws MalformedInput with line context on any
// XML error. source_name is used in diagnostics only.
void parse_xml(std::string_view bytes, XmlHandler& handler,
               std::string_view source_name);

}  // namespace wincc
