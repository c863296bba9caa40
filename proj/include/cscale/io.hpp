#pragma once

#include <string>

namespace cscale {

// Shortest round-trip decimal form ("%.17g"), used by every CSV writer so
// reruns are byte-identical.
std::string format_number(double v);

// Writes `content` to `path`, creating parent directories. Throws
// ValidationError on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace cscale
