// Copyright 2026 The opvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OPVC_ERROR_HPP
#define OPVC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opvc
{
/// Base of every error thrown by the library. `kind()` is a stable
/// machine-readable name used in CLI error reports.
class Error : public std::runtime_error
{
public:
  Error(std::string kind, const std::string & what)
  : std::runtime_error(what), kind_(std::move(kind))
  {
  }
  const std::string & kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

/// Malformed input bytes. `offset()` is the byte position of the problem.
class ParseError : public Error
{
public:
  ParseError(const std::string & what, std::size_t offset)
  : Error("ParseError", what + " (at byte " + std::to_string(offset) + ")"), offset_(offset)
  {
  }
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class TruncatedError : public Error
{
public:
  explicit TruncatedError(std::size_t frame_index)
  : Error("TruncatedError", "frame " + std::to_string(frame_index) + " payload is truncated"),
    frame_index_(frame_index)
  {
  }
  std::size_t frame_index() const noexcept { return frame_index_; }

private:
  std::size_t frame_index_;
};

class UnsupportedFormat : public Error
{
public:
  explicit UnsupportedFormat(const std::string & what) : Error("UnsupportedFormat", what) {}
};

class DimensionError : public Error
{
public:
  explicit DimensionError(const std::string & what) : Error("DimensionError", what) {}
};

class DomainError : public Error
{
public:
  explicit DomainError(const std::string & what) : Error("DomainError", what) {}
};

/// Damaged or inconsistent AER stream. `offset()` is the byte offset of the
/// failing section (0 for streams that never touched bytes).
class CorruptStream : public Error
{
public:
  CorruptStream(const std::string & what, std::size_t offset)
  : Error("CorruptStream", what + " (at byte " + std::to_string(offset) + ")"), offset_(offset)
  {
  }
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class MetricError : public Error
{
public:
  explicit MetricError(const std::string & what) : Error("MetricError", what) {}
};

class EmptyTableError : public Error
{
public:
  EmptyTableError() : Error("EmptyTableError", "rate-distortion table is empty") {}
};

class ConfigError : public Error
{
public:
  explicit ConfigError(const std::string & what) : Error("ConfigError", what) {}
};

}  // namespace opvc

#endif  // OPVC_ERROR_HPP
