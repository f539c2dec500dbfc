#!/usr/bin/env python3
"""End-to-end checks of the command-line tool: schema validation, exit codes,
output determinism and file formats."""

import json
import pathlib
import subprocess
import sys
import tempfile

CLI = sys.argv[1]


def run(args, **kw):
    return subprocess.run([CLI] + args, capture_output=True, text=True, **kw)


def write_cfg(tmp, name, cfg):
    p = pathlib.Path(tmp) / name
    p.write_text(json.dumps(cfg))
    return str(p)


def main():
    failures = []

    def check(name, cond, detail=""):
        print(("[pass] " if cond else "[FAIL] ") + name + (f"  -- {detail}" if detail else ""))
        if not cond:
            failures.append(name)

    with tempfile.TemporaryDirectory() as tmp:
        region_cfg = write_cfg(tmp, "region.json", {
            "mode": "lossless",
            "source": {"alphabet": 2, "mass": [0.5, 0.5]},
            "d_e": {"hamming": 2},
            "r": 1.0, "r0": 0.4, "rl": 0.0,
            "sweep": {"var": "rl", "grid_unused": 0,
                      "start": 0.0, "stop": 0.0, "count": 0,
                      "values": [0.1, 0.2, 0.3, 0.4, 0.5]},
        })
        out1 = pathlib.Path(tmp) / "out1"
        out2 = pathlib.Path(tmp) / "out2"
        r = run(["region", "--config", region_cfg, "--out", str(out1), "--format", "svg"])
        check("region exits 0", r.returncode == 0, r.stderr)
        csv1 = (out1 / "region.csv").read_text()
        check("region csv has header + rows", csv1.startswith("sweep_var,") and len(csv1.splitlines()) == 6)
        check("region svg written", (out1 / "region.svg").read_text().startswith("<svg"))
        # determinism: identical config -> byte-identical outputs
        r = run(["region", "--config", region_cfg, "--out", str(out2), "--format", "svg"])
        check("region rerun exits 0", r.returncode == 0, r.stderr)
        check("region csv deterministic", csv1 == (out2 / "region.csv").read_text())
        check("region svg deterministic",
              (out1 / "region.svg").read_text() == (out2 / "region.svg").read_text())
        # json format variant
        outj = pathlib.Path(tmp) / "outj"
        r = run(["region", "--config", region_cfg, "--out", str(outj), "--format", "json"])
        check("region json format", r.returncode == 0 and
              len(json.loads((outj / "region.json").read_text())) == 5)

        # the boundary drops to zero exactly at rl = r0
        rows = [line.split(",") for line in csv1.splitlines()[1:]]
        drop = {float(v): float(d) for _, v, d, _, _ in rows}
        check("region discontinuity at the key rate",
              drop[0.3] > 0.18 and drop[0.4] == 0.0 and drop[0.5] == 0.0)

        # schema errors exit 1
        bad_cfg = write_cfg(tmp, "bad.json", {"mode": "lossless"})
        r = run(["region", "--config", bad_cfg, "--out", tmp])
        check("missing keys exit 1", r.returncode == 1, f"rc={r.returncode}")
        empty_grid = write_cfg(tmp, "empty.json", {
            "mode": "lossless",
            "source": {"alphabet": 2, "mass": [0.5, 0.5]},
            "d_e": {"hamming": 2},
            "r": 1.0, "r0": 0.4, "rl": 0.0,
            "sweep": {"var": "rl", "values": []},
        })
        r = run(["region", "--config", empty_grid, "--out", tmp])
        check("empty sweep grid exits 1", r.returncode == 1, f"rc={r.returncode}")
        notjson = pathlib.Path(tmp) / "notjson.json"
        notjson.write_text("{nope")
        r = run(["region", "--config", str(notjson), "--out", tmp])
        check("invalid json exits 1", r.returncode == 1)
        r = run(["region", "--config", str(pathlib.Path(tmp) / "missing.json"), "--out", tmp])
        check("missing config exits 1", r.returncode == 1)

        # simulate: lossless demo with key enumeration
        sim_cfg = write_cfg(tmp, "sim.json", {
            "mode": "lossless",
            "source": {"alphabet": 2, "mass": [0.5, 0.5]},
            "d_e": {"hamming": 2},
            "n": 6, "r": 2.0, "r0": 0.5, "rl": 0.5,
            "trials": 25, "seeds": [3, 4],
        })
        sim_out = pathlib.Path(tmp) / "sim"
        r = run(["simulate", "--config", sim_cfg, "--out", str(sim_out)])
        check("simulate exits 0", r.returncode == 0, r.stderr)
        recs = json.loads((sim_out / "simulate.json").read_text())
        check("simulate record count", len(recs) == 2)
        keyenum = [a for rec in recs for a in rec["attacks"] if a["attack"] == "key_enumeration"]
        check("key enumeration attack reaches zero distortion",
              all(a["empirical_success"] == 0.0 for a in keyenum), str(keyenum))
        check("records carry the reference value",
              all("d_rl" in rec["reference"] for rec in recs))
        # bad seed type is a schema error
        bad_seed = write_cfg(tmp, "badseed.json", {
            "mode": "lossless",
            "source": {"alphabet": 2, "mass": [0.5, 0.5]},
            "d_e": {"hamming": 2},
            "n": 6, "r": 2.0, "r0": 0.5, "rl": 0.5,
            "seeds": ["not-a-seed"],
        })
        r = run(["simulate", "--config", bad_seed, "--out", tmp])
        check("bad seed type exits 1", r.returncode == 1, f"rc={r.returncode}")

        # subproblem: in-regime run and out-of-regime refusal
        sub_cfg = write_cfg(tmp, "sub.json", {
            "variant": "lossless",
            "source": {"alphabet": 2, "mass": [0.5, 0.5]},
            "d": {"hamming": 2},
            "r": 0.25, "r_c": 1.0, "big_d": 0.05, "delta": 0.45,
            "ns": [4, 6], "seeds": [1, 2],
            "tau": {"kind": "poly", "c": 1.0, "power": 1.0},
        })
        sub_out = pathlib.Path(tmp) / "sub"
        r = run(["subproblem", "--config", sub_cfg, "--out", str(sub_out)])
        check("subproblem exits 0", r.returncode == 0, r.stderr)
        lines = (sub_out / "subproblem.csv").read_text().splitlines()
        check("subproblem rows", len(lines) == 5 and lines[0] == "n,seed,lower,upper,tau_n,exceeds")
        refuse_cfg = write_cfg(tmp, "refuse.json", {
            "variant": "lossless",
            "source": {"alphabet": 2, "mass": [0.5, 0.5]},
            "d": {"hamming": 2},
            "r": 0.5, "r_c": 1.0, "big_d": 0.15,
            "ns": [4], "seeds": [1],
        })
        r = run(["subproblem", "--config", refuse_cfg, "--out", str(sub_out)])
        check("out-of-regime run reports refusal", r.returncode == 0 and "refused: regime" in r.stdout,
              r.stdout + r.stderr)

        # verify: the default suites pass and exit 0
        ver_cfg = write_cfg(tmp, "verify.json", {"suites": ["chernoff", "xi-mean", "exponent"]})
        ver_out = pathlib.Path(tmp) / "ver"
        r = run(["verify", "--config", ver_cfg, "--out", str(ver_out)])
        check("verify exits 0", r.returncode == 0, r.stdout + r.stderr)
        check("verify table written",
              (ver_out / "verify.csv").read_text().startswith("suite,check,measured"))

        # environment override for the output directory
        env_out = pathlib.Path(tmp) / "envout"
        r = subprocess.run([CLI, "region", "--config", region_cfg], capture_output=True,
                           text=True, env={"HENCHMAN_OUT": str(env_out), "PATH": "/usr/bin:/bin"})
        check("HENCHMAN_OUT override", r.returncode == 0 and (env_out / "region.csv").exists(),
              r.stderr)

        # parallel region run gives identical bytes
        lossy_cfg = write_cfg(tmp, "lossy.json", {
            "mode": "lossy",
            "source": {"alphabet": 2, "mass": [0.5, 0.5]},
            "d_e": {"hamming": 2},
            "d_b": {"hamming": 2},
            "r": 1.0, "r0": 0.2, "rl": 0.35, "d_b_max": 0.2,
            "sweep": {"var": "d_b", "values": [0.15, 0.3]},
        })
        pa = pathlib.Path(tmp) / "par1"
        pb = pathlib.Path(tmp) / "par2"
        r1 = run(["region", "--config", lossy_cfg, "--out", str(pa), "--jobs", "1"])
        r2 = run(["region", "--config", lossy_cfg, "--out", str(pb), "--jobs", "4"])
        check("lossy region runs", r1.returncode == 0 and r2.returncode == 0,
              r1.stderr + r2.stderr)
        check("jobs-independent output",
              (pa / "region.csv").read_text() == (pb / "region.csv").read_text())

        # every shipped config stays runnable
        cfg_dir = pathlib.Path(__file__).resolve().parent.parent / "configs"
        ship_out = pathlib.Path(tmp) / "ship"
        for name, sub in [("region_lossless.json", "region"),
                          ("region_lossy.json", "region"),
                          ("simulate_lossless.json", "simulate"),
                          ("simulate_lossy.json", "simulate"),
                          ("verify.json", "verify"),
                          ("subproblem_decay.json", "subproblem")]:
            r = run([sub, "--config", str(cfg_dir / name), "--out", str(ship_out / name)])
            check(f"shipped config {name} runs", r.returncode == 0, r.stderr or r.stdout[-200:])

    print(f"\n{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
