// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tpca {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A multi-index or linear index lies outside its shape.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Operands have incompatible shapes or mode groups.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An argument is invalid for reasons other than shape (bad mode id,
/// truncation count out of range, malformed option value, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A requested allocation or problem size exceeds a configured cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Input data violates a mathematical precondition, e.g. an operator
/// that is not self-adjoint within tolerance.
class ContractViolationError : public Error {
public:
    using Error::Error;
};

/// An iterative solver failed to reach its convergence target.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A serialized file is malformed (bad magic, truncation, non-finite
/// payload). Messages include the offending byte offset where known.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Image ingestion failed (unsupported pixel format, undecodable file,
/// empty manifest, ...).
class IngestError : public Error {
public:
    using Error::Error;
};

/// The operating system refused a read or write.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace tpca
