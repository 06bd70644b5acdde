#pragma once

#include <stdexcept>
#include <string>

namespace nestkit {

/// Base for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: block out of range, wrong block size, bad group spec, ...
class StructureError : public Error
{
public:
    using Error::Error;
};

/// An operation was called on an object that does not satisfy its precondition
/// (e.g. building a nesting hypergraph from a design that is not a BIBD).
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// Elements or subsets from two different groups were combined.
class GroupMismatch : public Error
{
public:
    GroupMismatch() : Error("operands belong to different groups") {}
};

} // namespace nestkit
