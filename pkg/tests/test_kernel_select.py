import os
import subprocess
import sys
from pathlib import Path

from cubiczeta import kernel

ROOT = Path(__file__).resolve().parents[1]


def _impl(env_value):
    env = dict(os.environ)
    env.pop("CUBICZETA_PURE_PYTHON", None)
    if env_value is not None:
        env["CUBICZETA_PURE_PYTHON"] = env_value
    out = subprocess.run([sys.executable, "-c", "from cubiczeta import kernel; print(kernel.IMPLEMENTATION)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_fallback_forced_by_env():
    assert _impl("1") == "python"


def test_default_prefers_compiled():
    expected = "cython" if "cython" in kernel.implementations() else "python"
    assert _impl(None) == expected


def test_pure_python_enumeration_matches():
    code = ("from cubiczeta.orbits import enumerate_orbits; "
            "print(sum(hash((r.rep, r.disc, r.stab, r.membership)) for r in enumerate_orbits(3000)))")
    env = dict(os.environ, CUBICZETA_PURE_PYTHON="1", PYTHONHASHSEED="0")
    py = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    env.pop("CUBICZETA_PURE_PYTHON")
    default = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    assert py == default


def test_benchmark_runs():
    out = subprocess.run([sys.executable, str(ROOT / "benchmarks" / "bench_kernel.py"), "--cutoffs", "2000",
                          "--repeat", "1"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "agree=True" in out.stdout
