# Copyright 2026 The ptdd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Dynamical decoupling under PT-symmetric qubit Hamiltonians."""

from ptdd._core import (
    UNIT_CONVENTION,
    ConfigError,
    DegenerateStateError,
    DomainError,
    Error,
    InvalidPulseError,
    PTParams,
    RangeError,
    __version__,
    expm,
    expm_series,
    format_config,
    h_pt,
    h_pt_passive,
    h_total,
    ideal_density,
    ideal_period,
    magnus,
    main,
    not_gate_time,
    phase,
    presets,
    selftest,
    simulate,
    sweep,
)
