#pragma once

#include <string>
#include <string_view>

namespace tailorsql::serve {

struct ExtractedSql {
  std::string sql;  // the SQL, or the raw response when nothing was found
  bool found = false;
};

// First fenced code block if any; otherwise the first statement starting with
// SELECT (anywhere, at a word boundary) or WITH (at the start of a line), up to
// the first ';'. Without either, returns the raw response with found = false.
ExtractedSql extract_sql(std::string_view response);

}  // namespace tailorsql::serve
