#include "manetsim/trace.hpp"

#include <cstdio>
#include <stdexcept>

namespace manetsim {

FileTraceSink::FileTraceSink(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open trace file: " + path);
}

void FileTraceSink::line(const std::string& s) { out_ << s << '\n'; }

std::string MemoryTraceSink::joined() const {
    std::string all;
    for (const auto& l : lines_) {
        all += l;
        all += '\n';
    }
    return all;
}

std::string tfmt(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    int n = std::vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    if (n < 0) return {};
    if (static_cast<std::size_t>(n) < sizeof(buf)) return std::string(buf, n);
    std::string big(static_cast<std::size_t>(n) + 1, '\0');
    va_start(ap, fmt);
    std::vsnprintf(big.data(), big.size(), fmt, ap);
    va_end(ap);
    big.resize(static_cast<std::size_t>(n));
    return big;
}

void Tracer::rec(int node, const char* layer, const char* event, const std::string& details) {
    if (!sink_) return;
    char head[64];
    std::snprintf(head, sizeof(head), "%.9f %d %s %s", clock_->now(), node, layer, event);
    std::string l(head);
    if (!details.empty()) {
        l += ' ';
        l += details;
    }
    sink_->line(l);
}

}  // namespace manetsim
