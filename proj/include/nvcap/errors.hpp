#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nvcap {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Argument outside the physical/mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

class NotFoundError : public Error {
  public:
    using Error::Error;
};

// Memory-window extraction failed (a branch never crosses mid-capacitance).
class ExtractionError : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

class CalibrationError : public Error {
  public:
    CalibrationError(const std::string& what, std::vector<double> residuals)
        : Error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const { return residuals_; }

  private:
    std::vector<double> residuals_;
};

} // namespace nvcap
