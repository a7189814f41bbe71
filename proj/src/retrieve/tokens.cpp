#include "tailorsql/retrieve/tokens.hpp"

#include "tailorsql/text.hpp"

namespace tailorsql::retrieve {

std::size_t count_tokens(std::string_view text) { return text::lexical_tokens(text).size(); }

}  // namespace tailorsql::retrieve
