#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ilat::cli {

/**
 * @brief Execute one command-line invocation of the `ilat` tool.
 *
 * `args` is the argument vector without the program name.  Reports are
 * written to `out`; usage messages and structured error objects go to `err`.
 *
 * Every subcommand builds a JSON report first and renders the human text
 * from that model, so `--json` and the default output always agree on
 * content.  Reports carry a `schema_version` field and no timestamps, and
 * JSON objects serialize with sorted keys, so identical invocations produce
 * byte-identical output.
 *
 * @return 0 on success; 1 when a domain computation rejects the request
 *         (the error is printed to `err` as a one-line JSON object with a
 *         stable `code`); 2 on usage errors (unknown or missing flags,
 *         malformed flag values, conflicting output selections).
 */
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace ilat::cli
