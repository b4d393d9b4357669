#pragma once

// Shared scalar types, constants and the error hierarchy.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace holodyn {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

enum class Errc {
  syntax,
  unknown_identifier,
  eval_singular,
  outside_domain,
  inversion_failed,
  outside_omega,
  no_convergence,
  slow_convergence,
  elliptic_automorphism,
  not_a_fixed_point,
  wrong_class,
  not_commuting,
  is_identity,
  unknown_entry,
  build_audit_failed,
  not_repelling,
  strip_unknown,
  no_contact_point,
  divergent_quotient,
  predicate_unavailable,
  step_underflow,
  backward_exit,
  invalid_argument,
};

/// True for failures of a numerical procedure (as opposed to a violated
/// precondition or malformed input).
constexpr bool is_numerical(Errc c) {
  switch (c) {
    case Errc::inversion_failed:
    case Errc::no_convergence:
    case Errc::slow_convergence:
    case Errc::divergent_quotient:
    case Errc::step_underflow:
    case Errc::backward_exit:
      return true;
    default:
      return false;
  }
}

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::syntax: return "SyntaxError";
    case Errc::unknown_identifier: return "UnknownIdentifier";
    case Errc::eval_singular: return "EvalSingular";
    case Errc::outside_domain: return "OutsideDomain";
    case Errc::inversion_failed: return "InversionFailed";
    case Errc::outside_omega: return "OutsideOmega";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::slow_convergence: return "SlowConvergence";
    case Errc::elliptic_automorphism: return "EllipticAutomorphismDetected";
    case Errc::not_a_fixed_point: return "NotAFixedPoint";
    case Errc::wrong_class: return "WrongClass";
    case Errc::not_commuting: return "NotCommuting";
    case Errc::is_identity: return "IsIdentity";
    case Errc::unknown_entry: return "UnknownEntry";
    case Errc::build_audit_failed: return "BuildAuditFailed";
    case Errc::not_repelling: return "NotRepelling";
    case Errc::strip_unknown: return "StripUnknown";
    case Errc::no_contact_point: return "NoContactPoint";
    case Errc::divergent_quotient: return "DivergentQuotient";
    case Errc::predicate_unavailable: return "PredicateUnavailable";
    case Errc::step_underflow: return "StepSizeUnderflow";
    case Errc::backward_exit: return "BackwardExit";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& msg)
      : Error(Errc::syntax, msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t offset, std::string name)
      : Error(Errc::unknown_identifier, "'" + name + "' at offset " + std::to_string(offset)),
        offset_(offset), name_(std::move(name)) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::size_t offset_;
  std::string name_;
};

// Carries the best iterate so callers can report partial progress.
class InversionFailed : public Error {
 public:
  InversionFailed(cplx target, cplx best, double residual)
      : Error(Errc::inversion_failed, "no preimage found, residual " + std::to_string(residual)),
        target_(target), best_(best), residual_(residual) {}
  cplx target() const noexcept { return target_; }
  cplx best() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }

 private:
  cplx target_, best_;
  double residual_;
};

/// Where a map lives; formula maps check their argument against it.
enum class Domain { disc, upper_half_plane, right_half_plane, plane };

constexpr const char* domain_name(Domain d) {
  switch (d) {
    case Domain::disc: return "disc";
    case Domain::upper_half_plane: return "upper-half-plane";
    case Domain::right_half_plane: return "right-half-plane";
    case Domain::plane: return "plane";
  }
  return "plane";
}

inline bool in_domain(Domain d, cplx z) {
  switch (d) {
    case Domain::disc: return std::norm(z) < 1.0;
    case Domain::upper_half_plane: return z.imag() > 0.0;
    case Domain::right_half_plane: return z.real() > 0.0;
    case Domain::plane: return std::isfinite(z.real()) && std::isfinite(z.imag());
  }
  return false;
}

}  // namespace holodyn
