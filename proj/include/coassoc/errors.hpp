#pragma once

#include <stdexcept>
#include <string>

namespace coassoc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChartDomainError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct DegenerateFormError : Error { using Error::Error; };
struct DegenerateSpanError : Error { using Error::Error; };
struct NotInSubgroupError : Error { using Error::Error; };
struct SliceError : Error { using Error::Error; };
struct SingularLocusError : Error { using Error::Error; };
struct NoRootError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace coassoc
