/*
   Copyright 2026 The ShockHash Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shockhash {

//! Base class of every error thrown by the library
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

//! A parameter is outside the documented domain of an operation
class InvalidParameter : public Error {
  public:
    using Error::Error;
};

//! Leaf sizes above one machine word of cells
class UnsupportedLeafSize : public InvalidParameter {
  public:
    using InvalidParameter::InvalidParameter;
};

//! An operation was called in a state its contract does not allow
class ContractViolation : public Error {
  public:
    using Error::Error;
};

//! A search or solver gave up (seed counter overflow, retry cap)
class ConstructionFailure : public Error {
  public:
    using Error::Error;
};

//! A serialized descriptor or bit stream is malformed or truncated
class FormatError : public Error {
  public:
    using Error::Error;
};

//! Two input keys are equal byte strings
class DuplicateKey : public Error {
  public:
    DuplicateKey(std::size_t first, std::size_t second)
        : Error("duplicate key at input positions " + std::to_string(first) + " and " + std::to_string(second)),
          first_index(first),
          second_index(second) {}

    std::size_t first_index;
    std::size_t second_index;
};

//! Two distinct keys share a 128-bit master hash code
class HashCollision : public Error {
  public:
    HashCollision(std::size_t first, std::size_t second)
        : Error("128-bit master hash collision between input positions " + std::to_string(first) + " and " +
                std::to_string(second)),
          first_index(first),
          second_index(second) {}

    std::size_t first_index;
    std::size_t second_index;
};

}  // namespace shockhash
