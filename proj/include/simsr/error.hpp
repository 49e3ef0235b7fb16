#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace simsr {

enum class ErrorCode {
  // lattice-core
  NotCommutative,
  NotAssociative,
  NotIdempotent,
  BadZero,
  BadTable,
  NotDistributive,
  LimitExceeded,
  // semiring-core
  AddNotCommutative,
  AddNotAssociative,
  AddZeroNotNeutral,
  MulNotAssociative,
  LeftDistFail,
  RightDistFail,
  ZeroNotAbsorbing,
  NotCompatible,
  // endo-semiring
  SizeLimit,
  NotEndomorphism,
  // semimodule
  ModuleAddInvalid,
  ActionNotAssociative,
  ActionZeroRing,
  ActionZeroModule,
  ActionAddDistFail,
  ActionModuleDistFail,
  NotALattice,
  PreconditionFailed,
  AnnulatorIsEverything,
  // catalog-cli
  ParseError,
  Mismatch,
  CatalogMissing,
  StaleVersion,
  BudgetExceeded,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotCommutative: return "NotCommutative";
    case ErrorCode::NotAssociative: return "NotAssociative";
    case ErrorCode::NotIdempotent: return "NotIdempotent";
    case ErrorCode::BadZero: return "BadZero";
    case ErrorCode::BadTable: return "BadTable";
    case ErrorCode::NotDistributive: return "NotDistributive";
    case ErrorCode::LimitExceeded: return "LimitExceeded";
    case ErrorCode::AddNotCommutative: return "AddNotCommutative";
    case ErrorCode::AddNotAssociative: return "AddNotAssociative";
    case ErrorCode::AddZeroNotNeutral: return "AddZeroNotNeutral";
    case ErrorCode::MulNotAssociative: return "MulNotAssociative";
    case ErrorCode::LeftDistFail: return "LeftDistFail";
    case ErrorCode::RightDistFail: return "RightDistFail";
    case ErrorCode::ZeroNotAbsorbing: return "ZeroNotAbsorbing";
    case ErrorCode::NotCompatible: return "NotCompatible";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::NotEndomorphism: return "NotEndomorphism";
    case ErrorCode::ModuleAddInvalid: return "ModuleAddInvalid";
    case ErrorCode::ActionNotAssociative: return "ActionNotAssociative";
    case ErrorCode::ActionZeroRing: return "ActionZeroRing";
    case ErrorCode::ActionZeroModule: return "ActionZeroModule";
    case ErrorCode::ActionAddDistFail: return "ActionAddDistFail";
    case ErrorCode::ActionModuleDistFail: return "ActionModuleDistFail";
    case ErrorCode::NotALattice: return "NotALattice";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::AnnulatorIsEverything: return "AnnulatorIsEverything";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Mismatch: return "Mismatch";
    case ErrorCode::CatalogMissing: return "CatalogMissing";
    case ErrorCode::StaleVersion: return "StaleVersion";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code and a
/// message naming the violated axiom together with a witness.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace simsr
