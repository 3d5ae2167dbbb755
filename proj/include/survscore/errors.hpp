#pragma once

#include <stdexcept>
#include <string>

namespace survscore {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy shallow.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad CSV, bad JSON schema, arguments out of domain.
class InputError : public Error {
 public:
  using Error::Error;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidScenario : public InputError {
 public:
  using InputError::InputError;
};

// Degenerate data: nothing to analyse.
class DegenerateData : public Error {
 public:
  using Error::Error;
};

class NoInformativeFailures : public DegenerateData {
 public:
  NoInformativeFailures()
      : DegenerateData("no informative failures: every risk set is covariate-degenerate") {}
};

class DegenerateRiskSet : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class SingularMatrix : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

// Analysis failures: the data are fine but a fit or a statistic cannot be
// produced.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

class ZeroDenominator : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class Nonconvergence : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class MonotoneLikelihood : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class SingularInformation : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class DegenerateSegment : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class AllCandidatesFailed : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

}  // namespace survscore
