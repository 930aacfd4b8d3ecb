#!/usr/bin/env python3
# Copyright 2026 The vecscope Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates suite_measurements.json.

Each case is described by the derived quantities it should produce; the
counter values are back-computed from them:

  INST_RETIRED (sve)      = baseline / r_ins
  VFP_SPEC (baseline)     = ai * misses * line
  MEM_ACCESS_RD           = misses / r_llc
  wall_time_ns (sve)      = baseline / speedup
"""
import json
import sys

FREQ_GHZ = 3.447
LINE = 64
MISSES = 10_000_000
BASE_INST = 10_000_000_000
BASE_TIME_NS = 1_000_000_000

# name, elen, threads, r_ins, ai, r_llc, speedup
CASES = [
    ("YOLOv3", 32, 1, 3.7, 40.0, 0.30, 3.1),
    ("YOLOv3", 32, 72, 3.7, 40.0, 0.30, 2.9),
    ("LLM training", 32, 1, 3.8, 25.0, 0.25, 3.0),
    ("LLM training", 32, 72, 1.6, 25.0, 0.25, 1.4),
    ("LLM inference", 32, 1, 3.6, 12.0, 0.20, 2.8),
    ("LLM inference", 32, 72, 1.5, 12.0, 0.20, 1.3),
    ("QC simulator", 64, 1, 1.8, 1.5, 0.10, 1.2),
    ("QC simulator", 64, 72, 1.8, 1.5, 0.10, 1.0),
    ("FFT1D", 64, 1, 1.02, 4.0, 0.15, 1.0),
    ("FFT1D", 64, 72, 1.02, 4.0, 0.15, 1.0),
    ("FFT2D", 64, 1, 1.05, 3.0, 0.15, 1.0),
    ("FFT2D", 64, 72, 1.03, 3.0, 0.15, 1.0),
    ("STREAM", 64, 1, 1.8, 0.0, 0.11, 1.05),
    ("STREAM", 64, 72, 1.8, 0.0, 0.11, 1.0),
    ("DGEMM", 64, 1, 1.7, 50.0, 0.05, 1.8),
    ("DGEMM", 64, 72, 1.7, 50.0, 0.05, 1.7),
    ("SGEMM", 32, 1, 3.5, 60.0, 0.05, 3.3),
    ("SGEMM", 32, 72, 3.5, 60.0, 0.05, 3.1),
    ("SPMV", 64, 1, 1.99, 0.03, 0.40, 1.1),
    ("SPMV", 64, 72, 1.99, 0.03, 0.40, 1.0),
    ("Jacobi2D", 64, 1, 1.7, 0.3, 0.12, 1.1),
    ("Jacobi2D", 64, 72, 1.1, 0.3, 0.12, 1.0),
    ("AlexNet", 32, 1, 3.6, 30.0, 0.30, 3.0),
    ("AlexNet", 32, 72, 3.6, 30.0, 0.30, 2.8),
    ("AutoDock", 32, 1, 2.2, 2.5, 0.35, 1.6),
    ("AutoDock", 32, 72, 2.2, 9.0, 0.35, 1.9),
]


def record(name, elen, threads, variant, inst, vfp, mem, time_ns):
    cycles = round(time_ns * FREQ_GHZ * threads)
    return {
        "kernel_name": name,
        "variant": variant,
        "threads": threads,
        "elen_bits": elen,
        "counters": {
            "CPU_CYCLES": cycles,
            "INST_RETIRED": inst,
            "LL_CACHE_MISS_RD": MISSES,
            "MEM_ACCESS_RD": mem,
            "STALL_BACKEND": round(cycles * 0.3),
            "VFP_SPEC": vfp,
        },
        "wall_time_ns": time_ns,
        "repetitions": 1,
    }


def main():
    records = []
    for name, elen, threads, r_ins, ai, r_llc, gain in CASES:
        vfp = round(ai * MISSES * LINE)
        mem = round(MISSES / r_llc)
        records.append(record(name, elen, threads, "baseline", BASE_INST, vfp, mem, BASE_TIME_NS))
        lanes = 128 // elen  # 128-bit vectors
        records.append(record(name, elen, threads, "sve", round(BASE_INST / r_ins),
                              round(vfp / lanes), round(mem / lanes), round(BASE_TIME_NS / gain)))
    json.dump(records, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
