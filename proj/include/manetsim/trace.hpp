#pragma once

#include <cstdarg>
#include <fstream>
#include <string>
#include <vector>

#include "manetsim/sim.hpp"

namespace manetsim {

/// One line per event: "<time> <node> <LAYER> <event> [key=value]...".
/// Times are printed with fixed 9-digit precision so runs diff cleanly.
class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void line(const std::string& s) = 0;
};

class FileTraceSink final : public TraceSink {
public:
    explicit FileTraceSink(const std::string& path);
    void line(const std::string& s) override;

private:
    std::ofstream out_;
};

class MemoryTraceSink final : public TraceSink {
public:
    void line(const std::string& s) override { lines_.push_back(s); }
    const std::vector<std::string>& lines() const { return lines_; }
    std::string joined() const;

private:
    std::vector<std::string> lines_;
};

/// printf-style formatter for trace details.
std::string tfmt(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

/// Bound to the run's clock; a null sink disables tracing at zero cost.
class Tracer {
public:
    Tracer() = default;
    Tracer(TraceSink* sink, const Scheduler* clock) : sink_(sink), clock_(clock) {}

    bool on() const { return sink_ != nullptr; }
    void rec(int node, const char* layer, const char* event, const std::string& details = {});

private:
    TraceSink* sink_ = nullptr;
    const Scheduler* clock_ = nullptr;
};

}  // namespace manetsim
