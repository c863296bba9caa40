#include "cscale/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cscale/errors.hpp"

namespace cscale {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw ValidationError("cannot create directory for '" + path + "': " + ec.message());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace cscale
