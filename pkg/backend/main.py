# backend/main.py
import os
import sys

from flask import Flask, jsonify, request, send_from_directory
from flask_cors import CORS

# Ensure project root is on sys.path so engine packages resolve under gunicorn
root_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if root_dir not in sys.path:
    sys.path.append(root_dir)

from backend.cli.output import plain
from clifford_rep.modules import ModuleSpec, Signature, build_module, verify_module_axioms
from clifford_rep.tables import min_admissible_dim
from common import config
from common.errors import EngineError
from heat_trace.totals import TraceControls, heat_trace_series
from htype_algebra.algebra import algebra_to_dict, build_algebra, jacobi_holds
from isospectral.classification import minimal_pair_table
from isospectral.families import generate_isospectral_family

MAX_T_VALUES = 50
MAX_FAMILY_M = 4

app = Flask(__name__)
app.logger.setLevel(config.LOG_LEVEL)

CORS(app, resources={r"/api/*": {"origins": config.CORS_ORIGINS}})

RESULT_DIR = config.ensure_result_dir()
app.config["RESULT_DIR"] = RESULT_DIR


class RequestError(ValueError):
    """Malformed request body or query; answered with 400."""


def _signature(raw) -> Signature:
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise RequestError("'sig' must be a list [r, s]")
    try:
        return Signature(int(raw[0]), int(raw[1]))
    except (TypeError, ValueError) as exc:
        raise RequestError(f"invalid signature: {exc}") from exc


def _module_spec(data: dict) -> ModuleSpec:
    sig = _signature(data.get("sig"))
    text = data.get("module", "minimal")
    if not isinstance(text, str):
        raise RequestError("'module' must be a string such as 'minimal' or 'p+:1,p-:1'")
    try:
        return ModuleSpec.parse(sig, text)
    except ValueError as exc:
        raise RequestError(str(exc)) from exc


def _t_values(data: dict):
    raw = data.get("t")
    if not isinstance(raw, list) or not raw:
        raise RequestError("'t' must be a non-empty list of positive numbers")
    if len(raw) > MAX_T_VALUES:
        raise RequestError(f"at most {MAX_T_VALUES} t values per request")
    try:
        return [float(t) for t in raw]
    except (TypeError, ValueError) as exc:
        raise RequestError(f"invalid t value: {exc}") from exc


def _respond(stage, compute):
    """Run ``compute`` and map failures to 400 / 422 / 500."""
    try:
        return jsonify(plain(compute())), 200
    except RequestError as exc:
        return jsonify({"error": str(exc)}), 400
    except EngineError as exc:
        app.logger.info(f"{stage} error: {exc}")
        return jsonify({"error": str(exc), "kind": type(exc).__name__}), 422
    except Exception as exc:
        app.logger.error(f"{stage} error: {exc}")
        return jsonify({"error": "Server error"}), 500


def _body() -> dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise RequestError("expected a JSON object body")
    return data


@app.route("/health", methods=["GET"])
def health():
    return jsonify({"status": "ok"}), 200


@app.route("/api/module", methods=["POST"])
def module_dump():
    def compute():
        module = build_module(_module_spec(_body()))
        payload = module.to_dict()
        payload["verified"] = verify_module_axioms(module).passed
        return payload

    return _respond("Module", compute)


@app.route("/api/algebra", methods=["POST"])
def algebra_dump():
    def compute():
        alg = build_algebra(build_module(_module_spec(_body())))
        payload = algebra_to_dict(alg)
        payload["jacobi"] = jacobi_holds(alg)
        return payload

    return _respond("Algebra", compute)


@app.route("/api/trace", methods=["POST"])
def trace():
    def compute():
        data = _body()
        spec = _module_spec(data)
        t_values = _t_values(data)
        try:
            ctrl = TraceControls(tail_tolerance=float(data.get("tol", 1e-12)))
        except (TypeError, ValueError) as exc:
            raise RequestError(str(exc)) from exc
        laplacian = bool(data.get("laplacian", False))
        series = heat_trace_series(build_algebra(build_module(spec)), t_values, ctrl, laplacian=laplacian)
        return {
            "module": spec.to_dict(),
            "laplacian": laplacian,
            "rows": [{"t": t, "value": value, "tail_bound": bound} for t, value, bound in series.rows()],
        }

    return _respond("Trace", compute)


@app.route("/api/classify", methods=["GET"])
def classify():
    def compute():
        try:
            r, s = int(request.args["r"]), int(request.args["s"])
        except (KeyError, ValueError) as exc:
            raise RequestError("query parameters r and s must be integers") from exc
        payload = minimal_pair_table(r, s).to_dict()
        payload["dimensions"] = [min_admissible_dim(r, s) + r + s, min_admissible_dim(s, r) + r + s]
        return payload

    return _respond("Classify", compute)


@app.route("/api/family", methods=["POST"])
def family():
    def compute():
        data = _body()
        sig = _signature(data.get("sig"))
        try:
            m = int(data.get("m", 1))
        except (TypeError, ValueError) as exc:
            raise RequestError("'m' must be an integer") from exc
        if not 1 <= m <= MAX_FAMILY_M:
            raise RequestError(f"'m' must lie in [1, {MAX_FAMILY_M}]")
        return generate_isospectral_family(sig, m).to_dict()

    return _respond("Family", compute)


@app.route("/artifacts/<path:filename>")
def get_artifact(filename):
    safe_name = os.path.basename(filename)
    return send_from_directory(RESULT_DIR, safe_name, as_attachment=False, conditional=True)


if __name__ == "__main__":
    app.run(debug=True, host="0.0.0.0", port=5000)
