#include "sqnm/io/report.hpp"

#include "sqnm/error.hpp"

#include <fstream>

namespace sqnm::io {

std::string render_report(const Json& report) {
    return report.dump(2) + '\n';
}

void save_report(const Json& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    out << render_report(report);
    if (!out) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

} // namespace sqnm::io
