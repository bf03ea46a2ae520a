#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sheetmetrics {

// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed A1 address or column name. fragment() is the offending text.
class AddressError : public Error {
public:
    AddressError(const std::string& message, std::string fragment)
        : Error(message), fragment_(std::move(fragment)) {}

    const std::string& fragment() const noexcept { return fragment_; }

private:
    std::string fragment_;
};

// Formula text that does not tokenize or parse. offset() is a 0-based
// character offset into the formula source (end of input == source length).
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Canonical workbook document rejected during ingestion.
class LoadError : public Error {
public:
    LoadError(const std::string& message, std::string location)
        : Error(location.empty() ? message : location + ": " + message),
          location_(std::move(location)) {}

    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

class UnknownSheetError : public Error {
public:
    explicit UnknownSheetError(std::string sheet)
        : Error("unknown sheet '" + sheet + "'"), sheet_(std::move(sheet)) {}

    const std::string& sheet() const noexcept { return sheet_; }

private:
    std::string sheet_;
};

// Invalid numeric input to the statistics routines (empty, mismatched, constant...).
class StatsError : public Error {
public:
    using Error::Error;
};

// Malformed tabular input (score or metric CSV). row() is the 1-based line
// number in the file, 0 when the problem is not tied to a line.
class InputError : public Error {
public:
    InputError(const std::string& message, std::size_t row = 0)
        : Error(row == 0 ? message : "row " + std::to_string(row) + ": " + message),
          row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

}  // namespace sheetmetrics
