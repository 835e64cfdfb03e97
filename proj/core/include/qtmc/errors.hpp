#pragma once

#include <stdexcept>
#include <string>

namespace qtmc {

// Every failure mode surfaces as a named error so that callers (and the CLI)
// can report "Infeasible" or "EmptyWindow" instead of a raw numeric abort.
class Error : public std::runtime_error {
public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error("ShapeError", what) {}
};

struct KindMismatch : Error {
  explicit KindMismatch(const std::string& what) : Error("KindMismatch", what) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error("ValidationError", what) {}
};

struct Infeasible : Error {
  explicit Infeasible(const std::string& what) : Error("Infeasible", what) {}
};

struct NonCommutingBath : Error {
  explicit NonCommutingBath(const std::string& what) : Error("NonCommutingBath", what) {}
};

struct NonCommuting : Error {
  explicit NonCommuting(const std::string& what) : Error("NonCommuting", what) {}
};

struct NonCommutingHamiltonian : Error {
  explicit NonCommutingHamiltonian(const std::string& what)
      : Error("NonCommutingHamiltonian", what) {}
};

struct NotInSubspace : Error {
  explicit NotInSubspace(const std::string& what) : Error("NotInSubspace", what) {}
};

struct EmptyWindow : Error {
  explicit EmptyWindow(const std::string& what) : Error("EmptyWindow", what) {}
};

struct DimCap : Error {
  explicit DimCap(const std::string& what) : Error("DimCap", what) {}
};

struct BoundaryViolation : Error {
  explicit BoundaryViolation(const std::string& what) : Error("BoundaryViolation", what) {}
};

struct IndexError : Error {
  explicit IndexError(const std::string& what) : Error("IndexError", what) {}
};

// Parse failures carry a JSON-pointer style path to the offending field.
class ParseError : public Error {
public:
  ParseError(std::string path, const std::string& reason)
      : Error("ParseError", path + ": " + reason), path_(std::move(path)), reason_(reason) {}
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

private:
  std::string path_;
  std::string reason_;
};

}  // namespace qtmc
