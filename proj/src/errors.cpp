#include "invtag/errors.hpp"

#include <utility>

namespace invtag {

UnknownLabel::UnknownLabel(std::string label)
    : Error("unknown label: " + label), label_(std::move(label)) {}

DuplicateTarget::DuplicateTarget(const std::string& label_word)
    : Error("target label word already in known context: " + label_word) {}

EmptyAllowedSet::EmptyAllowedSet() : Error("allowed token set is empty") {}

LengthMismatch::LengthMismatch(std::size_t expected, std::size_t actual)
    : Error("length mismatch: expected " + std::to_string(expected) + ", got " +
            std::to_string(actual)) {}

ParseError::ParseError(std::string where, const std::string& what)
    : Error("parse error at " + where + ": " + what), where_(std::move(where)) {}

SupportInfeasible::SupportInfeasible(std::string label, std::size_t available,
                                     std::size_t k)
    : Error("support infeasible for label " + label + ": " +
            std::to_string(available) + " instances available, k=" +
            std::to_string(k)),
      label_(std::move(label)) {}

FixtureMismatch::FixtureMismatch(std::string name, const std::string& detail)
    : Error("fixture mismatch [" + name + "]: " + detail),
      name_(std::move(name)) {}

}  // namespace invtag
