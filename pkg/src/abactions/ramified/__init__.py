"""Totally ramified elementary abelian actions: the space Omega, its stabilizers and orbit counts."""
from .omega import (ENUM_CEILING, TABLE51_PAIRS, ActionElement, OmegaMatrix, act, beta_n, encode_matrices,
                    enumerate_omega, group_order, omega_array, omega_bar_count, omega_count, omega_rref_array,
                    orbit_count_oracle, orbit_partition_oracle, scaled_sum_count, table51,
                    unique_when_r_is_v_plus_1)
from .pipeline import StrataReport, build_strata_report, d_matrix, pipeline_orbit_count
from .stabilizers import (FixedPointReport, SubgroupRecord, candidate_records, centralizer_size,
                          conjugating_element, exact_stabilizer_classes, fixed_points, fixed_set_size,
                          has_fixed_point, normalizer_size, point_stabilizer, record_from_generators,
                          records_conjugate, stabilizer_classes, trivial_record)

__all__ = [
    "ENUM_CEILING", "TABLE51_PAIRS", "ActionElement", "OmegaMatrix", "act", "beta_n", "encode_matrices",
    "enumerate_omega", "group_order", "omega_array", "omega_bar_count", "omega_count", "omega_rref_array",
    "orbit_count_oracle", "orbit_partition_oracle", "scaled_sum_count", "table51", "unique_when_r_is_v_plus_1",
    "StrataReport", "build_strata_report", "d_matrix", "pipeline_orbit_count",
    "FixedPointReport", "SubgroupRecord", "candidate_records", "centralizer_size", "conjugating_element",
    "exact_stabilizer_classes", "fixed_points", "fixed_set_size", "has_fixed_point", "normalizer_size",
    "point_stabilizer", "record_from_generators", "records_conjugate", "stabilizer_classes", "trivial_record",
]
