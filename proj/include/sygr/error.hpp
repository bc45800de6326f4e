#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "sygr/states.hpp"

namespace sygr {

// Base of every data/estimation failure. The CLI maps these to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A transient row that must be estimated has no observed outcomes.
class InsufficientData : public Error {
 public:
  explicit InsufficientData(AcademicState state)
      : Error("insufficient data: no completed transitions observed from state " +
              std::string(state_name(state))),
        state_(state) {}
  AcademicState state() const noexcept { return state_; }

 private:
  AcademicState state_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string column, const std::string& reason)
      : Error("row " + std::to_string(row) + ", column '" + column + "': " + reason),
        row_(row),
        column_(std::move(column)) {}
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

class DuplicateId : public Error {
 public:
  explicit DuplicateId(std::string id)
      : Error("duplicate student_id '" + id + "'"), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class InvariantViolation : public Error {
 public:
  InvariantViolation(std::size_t row, const std::string& rule)
      : Error("row " + std::to_string(row) + ": " + rule), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class MissingExposure : public Error {
 public:
  explicit MissingExposure(const std::string& id)
      : Error("student '" + id + "' has no LA exposure year") {}
};

class EmptyCohort : public Error {
 public:
  using Error::Error;
};

class HorizonTooEarly : public Error {
 public:
  HorizonTooEarly(int cohort_year, int horizon_year)
      : Error("cohort " + std::to_string(cohort_year) + " has only " +
              std::to_string(horizon_year - cohort_year) +
              " observable years at horizon " + std::to_string(horizon_year) +
              "; six are required"),
        cohort_year_(cohort_year) {}
  int cohort_year() const noexcept { return cohort_year_; }

 private:
  int cohort_year_;
};

class NoRecords : public Error {
 public:
  NoRecords() : Error("no records") {}
};

class EstimatorFailedOnOriginal : public Error {
 public:
  explicit EstimatorFailedOnOriginal(const std::string& cause)
      : Error("estimator failed on the original data: " + cause) {}
};

class TooManyFailedReplicates : public Error {
 public:
  TooManyFailedReplicates(std::size_t failed, std::size_t total)
      : Error(std::to_string(failed) + " of " + std::to_string(total) +
              " bootstrap replicates failed (limit 10%); the group is too small"),
        failed_(failed) {}
  std::size_t failed() const noexcept { return failed_; }

 private:
  std::size_t failed_;
};

class EnsembleTooSmall : public Error {
 public:
  EnsembleTooSmall() : Error("ensemble needs at least two values") {}
};

class DegenerateEnsemble : public Error {
 public:
  explicit DegenerateEnsemble(double value)
      : Error("all ensemble values equal " + std::to_string(value)), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

// Generator config file problems, with 1-based line numbers (0 = whole file).
class SpecError : public Error {
 public:
  SpecError(std::size_t line, const std::string& reason)
      : Error(line == 0 ? reason : "line " + std::to_string(line) + ": " + reason),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sygr
