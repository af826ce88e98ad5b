# Copyright 2026 The ShockHash Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Minimal perfect hashing with ShockHash leaves inside a RecSplit tree."""

from ._shockhash import (
    ConstructionFailure,
    DuplicateKey,
    Error,
    FormatError,
    HashCollision,
    InvalidParameter,
    Mphf,
    Retrieval,
    experiments,
    master_hash,
    synthetic_keys,
)

__all__ = [
    "ConstructionFailure",
    "DuplicateKey",
    "Error",
    "FormatError",
    "HashCollision",
    "InvalidParameter",
    "Mphf",
    "Retrieval",
    "experiments",
    "master_hash",
    "synthetic_keys",
]
