#include "wincc/xml_reader.hpp"

#include <expat.h>

#include <cstring>
#include <string>

namespace wincc {

namespace {

struct ParseState {
  XmlHandler* handler;
  std::exception_ptr pending;  // first handler exception, rethrown at the end
  XML_Parser parser;
};

void start_element(void* user, const XML_Char* name, const XML_Char** atts) {
  auto* state = static_cast<ParseState*>(user);
  if (state->pending) return;
  try {
    std::vector<XmlHandler::Attr> attrs;
    for (int i = 0; atts[i] != nullptr; i += 2)
      attrs.emplace_back(atts[i], atts[i + 1]);
    state->handler->on_start(name, attrs);
  } catch (...) {
    state->pending = std::current_exception();
    XML_StopParser(state->parser, XML_FALSE);
  }
}

void end_element(void* user, const XML_Char* name) {
  auto* state = static_cast<ParseState*>(user);
  if (state->pending) return;
  try {
    state->handler->on_end(name);
  } catch (...) {
    state->pending = std::current_exception();
    XML_StopParser(state->parser, XML_FALSE);
  }
}

void character_data(void* user, const XML_Char* data, int len) {
  auto* state = static_cast<ParseState*>(user);
  if (state->pending) return;
  try {
    state->handler->on_text(std::string_view(data, static_cast<size_t>(len)));
  } catch (...) {
    state->pending = std::current_exception();
    XML_StopParser(state->parser, XML_FALSE);
  }
}

}  // namespace

void parse_xml(std::string_view bytes, XmlHandler& handler,
               std::string_view source_name) {
  XML_Parser parser = XML_ParserCreate(nullptr);
  if (!parser) throw Error("failed to create XML parser");

  ParseState state{&handler, nullptr, parser};
  XML_SetUserData(parser, &state);
  XML_SetElementHandler(parser, start_element, end_element);
  XML_SetCharacterDataHandler(parser, character_data);

  XML_Status status = XML_Parse(parser, bytes.data(),
                                static_cast<int>(bytes.size()), XML_TRUE);
  if (state.pending) {
    XML_ParserFree(parser);
    std::rethrow_exception(state.pending);
  }
  if (status == XML_STATUS_ERROR) {
    std::string message =
        std::string(source_name) + ":" +
        std::to_string(XML_GetCurrentLineNumber(parser)) + ": " +
        XML_ErrorString(XML_GetErrorCode(parser));
    XML_ParserFree(parser);
    throw MalformedInput(message);
  }
  XML_ParserFree(parser);
}

}  // namespace wincc
