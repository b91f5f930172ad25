"""JSON/CSV interchange: matrices, photons, run configurations, results.

Matrices travel as ``{"rows", "cols", "re", "im"}`` with row-major real and
imaginary parts. CSV floats carry 17 significant digits so a reloaded value
is bit-identical to the written one.
"""

import csv
import json
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distribution import POL_INSENSITIVE, POL_RESOLVED, Distribution
from .errors import ValidationError
from .events import DetectionEvent, TimeGrid, covering_grid, sinc_tiled_grid
from .photons import Polarization, SpectralAmplitude, max_integration_time
from .probabilities import MBCSInstance
from .sampling import SampleBatch
from .unitaries import haar_unitary


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def matrix_to_dict(u: np.ndarray) -> dict:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2:
        raise ValidationError("only matrices serialize to the matrix schema")
    return {
        "rows": int(u.shape[0]),
        "cols": int(u.shape[1]),
        "re": u.real.reshape(-1).tolist(),
        "im": u.imag.reshape(-1).tolist(),
    }


def matrix_from_dict(d: dict) -> np.ndarray:
    _check_keys(d, {"rows", "cols", "re", "im"}, "matrix")
    rows, cols = int(d["rows"]), int(d["cols"])
    re = np.asarray(d["re"], dtype=np.float64)
    im = np.asarray(d["im"], dtype=np.float64)
    if re.shape != (rows * cols,) or im.shape != (rows * cols,):
        raise ValidationError("matrix entry count does not match rows * cols")
    return (re + 1j * im).reshape(rows, cols)


def save_matrix(u: np.ndarray, path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(u), fh)
        fh.write("\n")


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_dict(json.load(fh))


def spectrum_to_dict(spec: SpectralAmplitude) -> dict:
    j = spec.polarization.jones
    out = {
        "shape": spec.shape,
        "bandwidth": spec.bandwidth,
        "central_frequency": spec.central_frequency,
        "emission_time": spec.emission_time,
        "jones": [j[0].real, j[0].imag, j[1].real, j[1].imag],
    }
    if spec.shape == "tabulated":
        out["grid"] = spec.grid.tolist()
        out["values"] = spec.values.tolist()
    return out


def spectrum_from_dict(d: dict) -> SpectralAmplitude:
    allowed = {"shape", "bandwidth", "central_frequency", "emission_time", "jones"}
    if d.get("shape") == "tabulated":
        allowed |= {"grid", "values"}
    _check_keys(d, allowed, "spectrum", required=allowed - {"grid", "values"})
    j = d["jones"]
    if len(j) != 4:
        raise ValidationError("jones must be [re1, im1, re2, im2]")
    pol = Polarization(np.array([j[0] + 1j * j[1], j[2] + 1j * j[3]]))
    return SpectralAmplitude(
        shape=d["shape"],
        bandwidth=float(d["bandwidth"]),
        central_frequency=float(d["central_frequency"]),
        emission_time=float(d["emission_time"]),
        polarization=pol,
        grid=None if "grid" not in d else np.asarray(d["grid"], dtype=np.float64),
        values=None if "values" not in d else np.asarray(d["values"], dtype=np.float64),
    )


def _event_row(ev) -> tuple:
    if isinstance(ev, DetectionEvent):
        ports = "|".join(str(p) for p in ev.ports)
        bins = "|".join(str(k) for k in ev.bins)
        pols = "" if ev.pols is None else "|".join(str(p) for p in ev.pols)
        return ports, bins, pols
    # generic hashable events (e.g. bunching multisets): ports only
    return "|".join(str(p) for p in ev), "", ""


def distribution_to_csv(dist: Distribution, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["ports", "bins", "pols", "probability"])
        for i in range(len(dist)):
            ports, bins, pols = _event_row(dist.event(i))
            writer.writerow([ports, bins, pols, fmt(dist.probs[i])])


def distribution_to_dict(dist: Distribution) -> dict:
    """JSON-ready form of a distribution; meant for modest supports."""
    events = []
    for i in range(len(dist)):
        ev = dist.event(i)
        if isinstance(ev, DetectionEvent):
            events.append(
                {
                    "ports": list(ev.ports),
                    "bins": list(ev.bins),
                    "pols": None if ev.pols is None else list(ev.pols),
                    "probability": float(dist.probs[i]),
                }
            )
        else:
            events.append({"ports": list(ev), "probability": float(dist.probs[i])})
    return {"total_mass": dist.total_mass, "events": events}


def distribution_from_csv(path) -> Distribution:
    events = []
    probs = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            ports = tuple(int(p) for p in row["ports"].split("|"))
            if row["bins"]:
                bins = tuple(int(k) for k in row["bins"].split("|"))
                pols = (
                    tuple(int(p) for p in row["pols"].split("|")) if row["pols"] else None
                )
                events.append(DetectionEvent(ports, bins, pols))
            else:
                events.append(ports)
            probs.append(float(row["probability"]))
    return Distribution.from_events(events, np.array(probs))


def samples_to_csv(batch: SampleBatch, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["draw_index", "ports", "bins", "pols"])
        for i in range(len(batch)):
            ports, bins, pols = _event_row(batch.source.event(int(batch.indices[i])))
            writer.writerow([i, ports, bins, pols])


def write_json(data: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _check_keys(d: dict, allowed: set, label: str, required: Optional[set] = None) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ValidationError(f"unknown {label} fields: {sorted(unknown)}")
    missing = (required if required is not None else allowed) - set(d)
    if missing:
        raise ValidationError(f"missing {label} fields: {sorted(missing)}")


@dataclass(frozen=True)
class RunConfig:
    """Validated experiment description loaded from a JSON document."""

    matrix_source: dict
    input_ports: tuple
    spectra: tuple
    delay: float
    grid_spec: dict
    theta: float
    mode: str
    seed: int
    out_dir: Optional[str] = None
    base_dir: str = "."


def load_run_config(path) -> RunConfig:
    with open(path) as fh:
        raw = json.load(fh)
    allowed = {
        "unitary",
        "input_ports",
        "spectra",
        "delay",
        "grid",
        "theta",
        "mode",
        "seed",
        "out_dir",
    }
    required = {"unitary", "input_ports", "spectra", "grid", "seed"}
    _check_keys(raw, allowed, "config", required=required)

    source = raw["unitary"]
    _check_keys(source, {"file", "haar"}, "unitary source", required=set())
    if ("file" in source) == ("haar" in source):
        raise ValidationError("unitary source must be exactly one of 'file' or 'haar'")
    if "haar" in source:
        _check_keys(source["haar"], {"size", "seed"}, "haar source")

    grid_spec = raw["grid"]
    _check_keys(
        grid_spec, {"half_width", "auto", "k_min", "k_max"}, "grid", required=set()
    )
    if not ("half_width" in grid_spec or grid_spec.get("auto")):
        raise ValidationError("grid needs 'half_width' or 'auto': true")

    mode = raw.get("mode", POL_INSENSITIVE)
    if mode not in (POL_RESOLVED, POL_INSENSITIVE):
        raise ValidationError(f"mode must be {POL_RESOLVED!r} or {POL_INSENSITIVE!r}")

    spectra = tuple(spectrum_from_dict(s) for s in raw["spectra"])
    return RunConfig(
        matrix_source=source,
        input_ports=tuple(int(p) for p in raw["input_ports"]),
        spectra=spectra,
        delay=float(raw.get("delay", 0.0)),
        grid_spec=grid_spec,
        theta=float(raw.get("theta", 0.05)),
        mode=mode,
        seed=int(raw["seed"]),
        out_dir=raw.get("out_dir"),
        base_dir=os.path.dirname(os.path.abspath(path)),
    )


def _resolve_grid(config: RunConfig) -> TimeGrid:
    spec = config.grid_spec
    if "k_min" in spec or "k_max" in spec:
        if not {"half_width", "k_min", "k_max"} <= set(spec):
            raise ValidationError("an explicit grid needs half_width, k_min and k_max")
        return TimeGrid(float(spec["half_width"]), int(spec["k_min"]), int(spec["k_max"]))
    all_sinc = all(s.shape == "sinc" for s in config.spectra)
    if "half_width" in spec:
        half = float(spec["half_width"])
        if all_sinc:
            return sinc_tiled_grid(config.spectra, config.delay, half_width=half)
        return covering_grid(config.spectra, config.delay, half)
    bound = max_integration_time(config.spectra, config.theta)
    if all_sinc:
        return sinc_tiled_grid(config.spectra, config.delay, max_half_width=bound)
    return covering_grid(config.spectra, config.delay, bound)


def instance_from_config(config: RunConfig) -> MBCSInstance:
    source = config.matrix_source
    if "file" in source:
        u = load_matrix(os.path.join(config.base_dir, source["file"]))
    else:
        u = haar_unitary(int(source["haar"]["size"]), int(source["haar"]["seed"]))
    grid = _resolve_grid(config)
    return MBCSInstance(
        unitary=u,
        input_ports=config.input_ports,
        spectra=config.spectra,
        delay=config.delay,
        grid=grid,
        theta=config.theta,
    )
