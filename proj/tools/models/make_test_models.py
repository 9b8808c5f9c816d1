"""Builds the small portable-model fixtures under tests/data/models and freezes their
expected outputs with onnxruntime (checked against the onnx reference evaluator).

    python3 tools/models/make_test_models.py tests/data/models
"""
import hashlib
import json
import pathlib
import sys

import numpy as np
import onnx
import onnxruntime as ort
from onnx import TensorProto, helper, numpy_helper
from onnx.reference import ReferenceEvaluator

OPSET = [helper.make_opsetid("", 21), helper.make_opsetid("ai.onnx.ml", 3)]
DIM = 8
HIDDEN = 6

VOCAB = (
    "the a an of and to in is was he she it they we cat dog house river bank money water "
    "quick fast slow big small large tiny happy sad good bad new old street road car city "
    "town walk run jump said told asked report story news paper book read write text mark"
).split()

SENTENCES = [
    "The quick dog ran to the river",
    "she said the news was good",
    "A big cat and a small dog",
    "they walk to town in the old car",
    "He read the paper and told a story",
    "water money bank river",
    "nothing here matches",
    "Mark the TEXT",
    "  the   house  ",
    "we asked",
]


def front(nodes, inits, rng):
    emb = rng.normal(0, 1, (len(VOCAB) + 1, DIM)).astype(np.float32)
    emb[0] = 0
    inits += [
        numpy_helper.from_array(emb, "emb"),
        numpy_helper.from_array(np.array([1], np.int64), "axis_last"),
        numpy_helper.from_array(np.array(0, np.int64), "zero"),
        numpy_helper.from_array(np.array(1.0, np.float32), "one"),
    ]
    nodes += [
        helper.make_node("StringNormalizer", ["text"], ["lower"], case_change_action="LOWER", locale="C.UTF-8"),
        helper.make_node("StringSplit", ["lower"], ["words", "lengths"]),
        helper.make_node(
            "LabelEncoder", ["words"], ["ids"], domain="ai.onnx.ml",
            keys_strings=VOCAB, values_int64s=list(range(1, len(VOCAB) + 1)), default_int64=0,
        ),
        helper.make_node("Gather", ["emb", "ids"], ["vecs"]),
        helper.make_node("Greater", ["ids", "zero"], ["known"]),
        helper.make_node("Cast", ["known"], ["maskf"], to=TensorProto.FLOAT),
        helper.make_node("Unsqueeze", ["maskf", "axis_neg"], ["mask3"]),
        helper.make_node("Mul", ["vecs", "mask3"], ["masked"]),
        helper.make_node("ReduceSum", ["masked", "axis_last"], ["total"], keepdims=0),
        helper.make_node("ReduceSum", ["maskf", "axis_last"], ["count"], keepdims=1),
        helper.make_node("Max", ["count", "one"], ["safe"]),
        helper.make_node("Div", ["total", "safe"], ["pooled"]),
    ]
    inits.append(numpy_helper.from_array(np.array([-1], np.int64), "axis_neg"))


def model(name, nodes, inits, inputs, outputs, opset=OPSET):
    graph = helper.make_graph(nodes, name, inputs, outputs, inits)
    m = helper.make_model(graph, opset_imports=opset, producer_name="textmark-fixtures")
    m.ir_version = 10
    helper.set_model_props(m, {"kind": name})
    return m


def build_encoder(rng):
    nodes, inits = [], []
    front(nodes, inits, rng)
    nodes.append(helper.make_node("Identity", ["pooled"], ["embedding"]))
    return model(
        "encoder", nodes, inits,
        [helper.make_tensor_value_info("text", TensorProto.STRING, [1])],
        [helper.make_tensor_value_info("embedding", TensorProto.FLOAT, [1, DIM])],
    )


def build_detector(rng):
    nodes, inits = [], []
    front(nodes, inits, rng)
    inits += [
        numpy_helper.from_array(rng.normal(0, 1, (DIM, HIDDEN)).astype(np.float32), "w1"),
        numpy_helper.from_array(rng.normal(0, 0.1, (HIDDEN,)).astype(np.float32), "b1"),
        numpy_helper.from_array(rng.normal(0, 1, (HIDDEN, 1)).astype(np.float32), "w2"),
        numpy_helper.from_array(np.array([0.1], np.float32), "b2"),
    ]
    nodes += [
        helper.make_node("Gemm", ["pooled", "w1", "b1"], ["h"]),
        helper.make_node("Relu", ["h"], ["hr"]),
        helper.make_node("Gemm", ["hr", "w2", "b2"], ["logit"]),
        helper.make_node("Sigmoid", ["logit"], ["score"]),
    ]
    return model(
        "detector", nodes, inits,
        [helper.make_tensor_value_info("text", TensorProto.STRING, [1])],
        [helper.make_tensor_value_info("score", TensorProto.FLOAT, [1, 1])],
    )


def build_zoo(rng):
    # float ops outside the text pipelines
    inits = [
        numpy_helper.from_array(rng.normal(0, 1, (4, 3)).astype(np.float32), "w"),
        numpy_helper.from_array(np.ones(3, np.float32), "gamma"),
        numpy_helper.from_array(np.full(3, 0.5, np.float32), "beta"),
        numpy_helper.from_array(np.array([3, 2], np.int64), "shape32"),
        numpy_helper.from_array(np.array([0], np.int64), "s0"),
        numpy_helper.from_array(np.array([2], np.int64), "s2"),
        numpy_helper.from_array(np.array([1], np.int64), "ax1"),
        numpy_helper.from_array(np.array(2.0, np.float32), "two"),
        numpy_helper.from_array(np.array(-0.5, np.float32), "lo"),
        numpy_helper.from_array(np.array(0.5, np.float32), "hi"),
        numpy_helper.from_array(np.array([2, 2, 3], np.int64), "shape223"),
    ]
    nodes = [
        helper.make_node("MatMul", ["x", "w"], ["mm"]),
        helper.make_node("LayerNormalization", ["mm", "gamma", "beta"], ["ln"], axis=-1, epsilon=1e-5),
        helper.make_node("Softmax", ["ln"], ["sm"], axis=-1),
        helper.make_node("Tanh", ["mm"], ["th"]),
        helper.make_node("Erf", ["th"], ["erf"]),
        helper.make_node("Add", ["sm", "erf"], ["a1"]),
        helper.make_node("Transpose", ["a1"], ["tr"], perm=[1, 0]),
        helper.make_node("Reshape", ["tr", "shape32"], ["rs"]),
        helper.make_node("Abs", ["rs"], ["ab"]),
        helper.make_node("Sqrt", ["ab"], ["sq"]),
        helper.make_node("Pow", ["sq", "two"], ["pw"]),
        helper.make_node("Slice", ["pw", "s0", "s2", "s0"], ["sl"]),
        helper.make_node("Concat", ["sl", "pw"], ["cat"], axis=0),
        helper.make_node("ReduceMean", ["cat", "ax1"], ["rm"], keepdims=1),
        helper.make_node("ReduceMax", ["cat", "ax1"], ["rx"], keepdims=0),
        helper.make_node("Less", ["th", "lo"], ["less"]),
        helper.make_node("Greater", ["th", "hi"], ["greater"]),
        helper.make_node("Or", ["less", "greater"], ["outside"]),
        helper.make_node("Clip", ["th", "lo", "hi"], ["clipped"]),
        helper.make_node("Where", ["outside", "clipped", "th"], ["wh"]),
        helper.make_node("Exp", ["wh"], ["ex"]),
        helper.make_node("Log", ["ex"], ["lg"]),
        helper.make_node("Neg", ["lg"], ["ng"]),
        helper.make_node("Sub", ["ng", "wh"], ["sb"]),
        helper.make_node("Expand", ["hi", "shape223"], ["expanded"]),
        helper.make_node("Flatten", ["expanded"], ["flat"], axis=1),
        helper.make_node("Gemm", ["x", "w"], ["gm"], alpha=0.5, beta=0.0, transA=0, transB=0),
        helper.make_node("Sigmoid", ["gm"], ["sg"]),
        helper.make_node("Reciprocal", ["two"], ["half"]),
        helper.make_node("Mul", ["sg", "half"], ["out_g"]),
    ]
    return model(
        "zoo", nodes, inits,
        [helper.make_tensor_value_info("x", TensorProto.FLOAT, [2, 4])],
        [
            helper.make_tensor_value_info(n, TensorProto.FLOAT, shape)
            for n, shape in (("ln", [2, 3]), ("sm", [2, 3]), ("rm", [5, 1]), ("rx", [5]), ("sb", [2, 3]),
                             ("flat", [2, 6]), ("out_g", [2, 3]))
        ],
    )


def build_unsupported_op():
    nodes = [helper.make_node("TopK", ["x", "k"], ["v", "i"])]
    inits = [numpy_helper.from_array(np.array([1], np.int64), "k")]
    return model(
        "unsupported_op", nodes, inits,
        [helper.make_tensor_value_info("x", TensorProto.FLOAT, [1, 4])],
        [helper.make_tensor_value_info("v", TensorProto.FLOAT, [1, 1]),
         helper.make_tensor_value_info("i", TensorProto.INT64, [1, 1])],
    )


def build_new_opset():
    nodes = [helper.make_node("Identity", ["x"], ["y"])]
    return model(
        "new_opset", nodes, [],
        [helper.make_tensor_value_info("x", TensorProto.FLOAT, [1])],
        [helper.make_tensor_value_info("y", TensorProto.FLOAT, [1])],
        opset=[helper.make_opsetid("", 23)],
    )


def build_float_input():
    nodes = [helper.make_node("Sigmoid", ["x"], ["y"])]
    return model(
        "float_input", nodes, [],
        [helper.make_tensor_value_info("x", TensorProto.FLOAT, [1])],
        [helper.make_tensor_value_info("y", TensorProto.FLOAT, [1, 1])],
    )


def run_both(m, feeds):
    sess = ort.InferenceSession(m.SerializeToString(), providers=["CPUExecutionProvider"])
    got = sess.run(None, feeds)
    ref = ReferenceEvaluator(m).run(None, feeds)
    for a, b in zip(got, ref):
        np.testing.assert_allclose(np.asarray(a, np.float64), np.asarray(b, np.float64), rtol=1e-5, atol=1e-5)
    return got


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240611)
    enc = build_encoder(rng)
    det = build_detector(rng)
    zoo = build_zoo(rng)
    expected = {"encoder": [], "detector": [], "zoo": {}}
    for s in SENTENCES:
        feeds = {"text": np.array([s], dtype=object)}
        expected["encoder"].append({"text": s, "embedding": [float(v) for v in run_both(enc, feeds)[0][0]]})
        expected["detector"].append({"text": s, "score": float(run_both(det, feeds)[0][0][0])})
    x = rng.normal(0, 1, (2, 4)).astype(np.float32)
    outs = run_both(zoo, {"x": x})
    expected["zoo"] = {
        "x": [float(v) for v in x.ravel()],
        "outputs": {
            o.name: {"shape": list(v.shape), "values": [float(t) for t in np.asarray(v).ravel()]}
            for o, v in zip(zoo.graph.output, outs)
        },
    }
    for name, m in [
        ("encoder", enc), ("detector", det), ("zoo", zoo), ("unsupported_op", build_unsupported_op()),
        ("new_opset", build_new_opset()), ("float_input", build_float_input()),
    ]:
        if name != "new_opset":
            onnx.checker.check_model(m)
        onnx.save(m, out / f"{name}.onnx")
    (out / "expected.json").write_text(json.dumps(expected, indent=1) + "\n")
    config = json.dumps({"dim": DIM, "seed": 20240611, "sentences": SENTENCES}, sort_keys=True)
    manifest = {
        "encoder_dim": DIM,
        "detector_threshold_hint": 0.5,
        "training_config_hash": hashlib.sha256(config.encode()).hexdigest(),
        "version": "fixture-1",
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/models")
