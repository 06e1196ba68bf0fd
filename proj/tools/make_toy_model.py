#!/usr/bin/env python3
"""Writes the toy inference fixture used by the model-backend tests.

Produces, under the output directory:
  toy.onnx       AveragePool(10) -> Flatten -> Gemm -> Softmax, 3x100x100 input
  toy.meta       sidecar metadata (input_w, input_h, mean, std)
  toy_224.meta   same constants but a 224x224 input (must be rejected)
  images/*.png   ten 100x100 frames, three classes
  manifest.txt   `<frame-id> <class>` labels for the images

The ONNX protobuf is encoded by hand so the script needs only numpy and
Pillow. The linear head is fit with plain softmax regression on the pooled
features until it separates the ten images.
"""

import argparse
import os
import struct

import numpy as np
from PIL import Image

CLASSES = ["street", "pedestrian", "biker"]
SIZE = 100
POOL = 10
MEAN = 0.5
STD = 0.5


# --- minimal protobuf wire encoding -------------------------------------------

def _varint(v):
    out = bytearray()
    v &= (1 << 64) - 1
    while True:
        b = v & 0x7F
        v >>= 7
        if v:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def _key(field, wire):
    return _varint((field << 3) | wire)


def f_int(field, v):
    return _key(field, 0) + _varint(v)


def f_bytes(field, data):
    if isinstance(data, str):
        data = data.encode()
    return _key(field, 2) + _varint(len(data)) + data


def f_float(field, v):
    return _key(field, 5) + struct.pack("<f", v)


def tensor(name, array):
    array = np.asarray(array, dtype="<f4")
    msg = b"".join(f_int(1, d) for d in array.shape)
    msg += f_int(2, 1)  # FLOAT
    msg += f_bytes(8, name)
    msg += f_bytes(9, array.tobytes())
    return msg


def value_info(name, dims):
    shape = b"".join(f_bytes(1, f_int(1, d)) for d in dims)
    tensor_type = f_int(1, 1) + f_bytes(2, shape)
    return f_bytes(1, name) + f_bytes(2, f_bytes(1, tensor_type))


def attr_int(name, v):
    return f_bytes(1, name) + f_int(3, v) + f_int(20, 2)


def attr_ints(name, values):
    return f_bytes(1, name) + b"".join(f_int(8, v) for v in values) + f_int(20, 7)


def node(op, inputs, outputs, name, attrs=()):
    msg = b"".join(f_bytes(1, i) for i in inputs)
    msg += b"".join(f_bytes(2, o) for o in outputs)
    msg += f_bytes(3, name) + f_bytes(4, op)
    msg += b"".join(f_bytes(5, a) for a in attrs)
    return msg


def model_bytes(weight, bias):
    nodes = [
        node("AveragePool", ["input"], ["pooled"], "pool",
             [attr_ints("kernel_shape", [POOL, POOL]), attr_ints("strides", [POOL, POOL])]),
        node("Flatten", ["pooled"], ["flat"], "flatten", [attr_int("axis", 1)]),
        node("Gemm", ["flat", "head.weight", "head.bias"], ["logits"], "head", [attr_int("transB", 1)]),
        node("Softmax", ["logits"], ["scores"], "softmax", [attr_int("axis", 1)]),
    ]
    graph = b"".join(f_bytes(1, n) for n in nodes)
    graph += f_bytes(2, "toy")
    graph += f_bytes(5, tensor("head.weight", weight))
    graph += f_bytes(5, tensor("head.bias", bias))
    graph += f_bytes(11, value_info("input", [1, 3, SIZE, SIZE]))
    graph += f_bytes(12, value_info("scores", [1, 3]))
    model = f_int(1, 6)  # IR version 6
    model += f_bytes(2, "make_toy_model")
    model += f_bytes(7, graph)
    model += f_bytes(8, f_bytes(1, "") + f_int(2, 11))
    return model


# --- data and head fit ----------------------------------------------------------

def make_images(rng):
    base = {
        "street": np.array([110, 110, 110]),
        "pedestrian": np.array([200, 60, 60]),
        "biker": np.array([50, 70, 210]),
    }
    labels = ["street"] * 4 + ["pedestrian"] * 3 + ["biker"] * 3
    images = []
    for i, label in enumerate(labels):
        img = base[label] + rng.integers(-30, 31, size=(SIZE, SIZE, 3))
        # A darker block somewhere breaks the uniformity.
        y, x = rng.integers(0, SIZE - 30, size=2)
        img[y:y + 30, x:x + 20] = img[y:y + 30, x:x + 20] * 0.6
        images.append((f"toy_{i:02d}", label, np.clip(img, 0, 255).astype(np.uint8)))
    return images


def features(img):
    x = (img.astype(np.float32) / 255.0 - MEAN) / STD
    x = x.transpose(2, 0, 1)  # CHW
    pooled = x.reshape(3, SIZE // POOL, POOL, SIZE // POOL, POOL).mean(axis=(2, 4))
    return pooled.reshape(-1)


def fit_head(x, y, epochs=500, lr=0.5):
    n, d = x.shape
    w = np.zeros((3, d), dtype=np.float64)
    b = np.zeros(3, dtype=np.float64)
    onehot = np.eye(3)[y]
    for _ in range(epochs):
        logits = x @ w.T + b
        logits -= logits.max(axis=1, keepdims=True)
        p = np.exp(logits)
        p /= p.sum(axis=1, keepdims=True)
        grad = (p - onehot) / n
        w -= lr * grad.T @ x
        b -= lr * grad.sum(axis=0)
    pred = (x @ w.T + b).argmax(axis=1)
    assert (pred == y).all(), "toy head failed to separate the training images"
    return w.astype(np.float32), b.astype(np.float32)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out", help="output directory")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    images = make_images(rng)
    os.makedirs(os.path.join(args.out, "images"), exist_ok=True)
    for frame_id, _, img in images:
        Image.fromarray(img, "RGB").save(os.path.join(args.out, "images", frame_id + ".png"))

    x = np.stack([features(img) for _, _, img in images])
    y = np.array([CLASSES.index(label) for _, label, _ in images])
    w, b = fit_head(x, y)

    with open(os.path.join(args.out, "toy.onnx"), "wb") as f:
        f.write(model_bytes(w, b))
    for name, size in (("toy.meta", SIZE), ("toy_224.meta", 224)):
        with open(os.path.join(args.out, name), "w") as f:
            f.write(f"input_w = {size}\ninput_h = {size}\nmean = {MEAN}\nstd = {STD}\n")
    with open(os.path.join(args.out, "manifest.txt"), "w") as f:
        f.write("# toy training frames\n")
        for frame_id, label, _ in images:
            f.write(f"{frame_id} {label}\n")


if __name__ == "__main__":
    main()
