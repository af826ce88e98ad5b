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

import pytest

import shockhash
from shockhash import experiments


def test_build_query_roundtrip():
    keys = shockhash.synthetic_keys(7, 20000)
    f = shockhash.Mphf.build(keys, leaf_size=24, bucket_size=1000)
    values = f.query_many(keys)
    assert sorted(values) == list(range(len(keys)))
    assert len(f) == len(keys)
    assert f(keys[3]) == values[3]

    data = f.serialize()
    g = shockhash.Mphf.deserialize(data)
    assert g.serialize() == data
    assert g.query_many(keys) == values
    assert g.verify(keys) == (True, "ok")
    assert f.stats()["total_bits"] == 8 * len(data)


def test_bytes_and_str_keys_hash_alike():
    assert shockhash.master_hash("hello") == (0xCBD8A7B341BD9B02, 0x5B1E906A48AE1D19)
    f = shockhash.Mphf.build(["a", "b", "c"], leaf_size=8, bucket_size=8, mode="plain")
    assert sorted(f.query_many(["a", "b", "c"])) == [0, 1, 2]
    assert f.mode == "plain"


def test_errors():
    with pytest.raises(shockhash.DuplicateKey):
        shockhash.Mphf.build(["x", "y", "x"])
    with pytest.raises(shockhash.InvalidParameter):
        shockhash.Mphf.build(["x"], leaf_size=65)
    with pytest.raises(ValueError):
        shockhash.Mphf.build(["x"], mode="fast")
    with pytest.raises(shockhash.FormatError):
        shockhash.Mphf.deserialize(b"SHKH")
    assert issubclass(shockhash.FormatError, shockhash.Error)


def test_corruption_fails_verify():
    keys = shockhash.synthetic_keys(3, 3000)
    f = shockhash.Mphf.build(keys, leaf_size=16, bucket_size=300)
    s = f.stats()
    data = bytearray(f.serialize())
    data[(s["header_bits"] + s["offset_bits"]) // 8 + 8] ^= 1
    ok, message = shockhash.Mphf.deserialize(bytes(data)).verify(keys)
    assert not ok
    assert message


def test_retrieval():
    keys = [f"k{i}" for i in range(5000)]
    bits = [(i * 7) % 3 % 2 for i in range(5000)]
    r = shockhash.Retrieval.build(keys, bits)
    assert [r.query(k) for k in keys] == bits
    assert r.size_bits <= 1.06 * len(keys) + 400


def test_experiments():
    e = experiments.enumerate(3)
    assert e["outcomes"] == 3**6
    assert e["pseudoforest_probability"] == (58, 81)
    assert e["mean_orientations"] == (16, 9)
    assert experiments.component_factor(2) == pytest.approx(8 / 3)
    assert experiments.bijection_probability(10) == pytest.approx(3.6288e-4)
    assert experiments.mean_trials(6, "rotate", 100) >= 1.0
