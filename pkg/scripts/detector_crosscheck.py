"""Cross-validate amplitude enumeration against the system-plus-pointer model.

For a batch of Haar-random two-level instances, compares the characteristic
function from the joint unitary simulation with the synthesis from the path
amplitudes, then inverts the sampled characteristic back to weights on the
integer lattice and reports worst-case gaps.
"""

import argparse
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from qndlab import (
    DetectorModel,
    build_qpd,
    detect_lattice,
    enumerate_amplitudes,
    haar_random_unitary,
    invert_to_qpd,
    sample_characteristic,
    uniform_lambda_grid,
)
from qndlab import ProtocolInstance, eigendecompose_hermitian
from qndlab.detector import characteristic_from_qpd
from qndlab.linalg import PAULI_Z, random_pure_state


def random_instance(seed):
    obs = eigendecompose_hermitian(PAULI_Z)
    return ProtocolInstance(
        rho0=random_pure_state(2, 3 * seed),
        u1=haar_random_unitary(2, 3 * seed + 1),
        u2=haar_random_unitary(2, 3 * seed + 2),
        observable=obs,
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instances", type=int, default=100)
    parser.add_argument("--lambda-samples", type=int, default=64)
    args = parser.parse_args()

    det = DetectorModel()
    lambdas = np.linspace(0.0, 2.0 * np.pi, args.lambda_samples, endpoint=False)
    worst_g = 0.0
    worst_w = 0.0
    for seed in range(args.instances):
        inst = random_instance(seed)
        qpd = build_qpd(enumerate_amplitudes(inst))
        samples = sample_characteristic(inst, det, lambdas)
        synth = characteristic_from_qpd(qpd, lambdas)
        worst_g = max(worst_g, float(np.max(np.abs(samples.values - synth))))

        lat = detect_lattice(inst.observable)
        grid = sample_characteristic(inst, det, uniform_lambda_grid(lat, 8))
        recovered = dict(invert_to_qpd(grid, lat).support)
        ref = dict(qpd.support)
        for delta in set(recovered) | set(ref):
            worst_w = max(worst_w, abs(recovered.get(delta, 0.0) - ref.get(delta, 0.0)))

    print(f"{args.instances} instances, {args.lambda_samples} lambda samples each")
    print(f"max |G(joint) - G(amplitudes)| = {worst_g:.3e}")
    print(f"max inverted-weight gap       = {worst_w:.3e}")
    ok = worst_g <= 1e-10 and worst_w <= 1e-8
    print("cross-check " + ("PASSED" if ok else "FAILED"))
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
