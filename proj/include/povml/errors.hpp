#pragma once

#include <stdexcept>
#include <string>

namespace povml {

// Bad user input: unreadable file, header/schema mismatch, malformed config.
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A pipeline stage failed on otherwise valid input. The CLI maps this to
// exit code 3 and includes the stage name in the diagnostic.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace povml
