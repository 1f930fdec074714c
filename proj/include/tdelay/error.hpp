#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tdelay {

enum class ErrorCode
{
    InvalidArgument,
    NonFiniteWindow,
    QuadratureFailure,
    ZeroEnergy,
    RatioOutOfRange,
    BinCountOverflow,
    ResonanceOutsideWindow,
    DuplicatePosition,
    DepthBudgetExceeded,
    RefinementFailure,
    OutOfSpan,
    NonPositive,
    ParseError,
    DuplicateName,
    MissingRequiredColumn,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// Raised by the catalog readers. Row and column are 1-based; 0 means the
/// error is not tied to a particular row or column.
class ParseError : public Error
{
  public:
    ParseError(ErrorCode code, std::size_t row, std::size_t column, const std::string& reason);

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& reason() const noexcept { return reason_; }

  private:
    std::size_t row_;
    std::size_t column_;
    std::string reason_;
};

}  // namespace tdelay
