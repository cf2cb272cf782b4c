"""Pure NumPy implementations of the spatial kernels.

This is the portable backend: every function here has a compiled twin in
``_native`` (Cython) with identical numerics. Per-output-element
accumulation order is pinned to (channel, kernel row, kernel col) so both
backends agree bitwise with a straight nested-loop computation, and
bilinear sums are grouped into left/right pairs so horizontally mirrored
sampling grids produce bitwise-identical values.
"""

import numpy as np

from ..errors import DimensionError

BACKEND_NAME = "python"


def conv_out_size(size: int, k: int, stride: int, padding: int, dilation: int) -> int:
    return (size + 2 * padding - dilation * (k - 1) - 1) // stride + 1


def conv2d_forward(x, w, stride, padding, dilation):
    b, c, h, ww = x.shape
    o, cw, kh, kw = w.shape
    if cw != c:
        raise DimensionError(f"conv2d: input has {c} channels, kernel expects {cw}")
    ho = conv_out_size(h, kh, stride, padding, dilation)
    wo = conv_out_size(ww, kw, stride, padding, dilation)
    if ho < 1 or wo < 1:
        raise DimensionError(
            f"conv2d: non-positive output size {ho}x{wo} for input {h}x{ww}, "
            f"kernel {kh}x{kw}, stride {stride}, padding {padding}, dilation {dilation}"
        )
    xp = x
    if padding:
        xp = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    out = np.zeros((b, o, ho, wo), dtype=x.dtype)
    # accumulate in (c, ki, kj) order per output element
    for ci in range(c):
        for ki in range(kh):
            for kj in range(kw):
                xs = xp[
                    :,
                    ci,
                    ki * dilation : ki * dilation + (ho - 1) * stride + 1 : stride,
                    kj * dilation : kj * dilation + (wo - 1) * stride + 1 : stride,
                ]
                out += xs[:, None, :, :] * w[None, :, ci, ki, kj, None, None]
    return out


def conv2d_backward(x, w, gy, stride, padding, dilation):
    b, c, h, ww = x.shape
    o, _, kh, kw = w.shape
    ho, wo = gy.shape[2], gy.shape[3]
    xp = x
    if padding:
        xp = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    gxp = np.zeros_like(xp)
    gw = np.zeros_like(w)
    for ci in range(c):
        for ki in range(kh):
            for kj in range(kw):
                hs = slice(ki * dilation, ki * dilation + (ho - 1) * stride + 1, stride)
                ws = slice(kj * dilation, kj * dilation + (wo - 1) * stride + 1, stride)
                gxp[:, ci, hs, ws] += np.einsum(
                    "bohw,o->bhw", gy, w[:, ci, ki, kj], optimize=False
                )
                gw[:, ci, ki, kj] = np.einsum(
                    "bohw,bhw->o", gy, xp[:, ci, hs, ws], optimize=False
                )
    if padding:
        gx = gxp[:, :, padding : padding + h, padding : padding + ww]
    else:
        gx = gxp
    return np.ascontiguousarray(gx), gw


def _pool_out(h, w, k, s):
    if k > h or k > w:
        raise DimensionError(f"pool: kernel {k} exceeds spatial dims {h}x{w}")
    return (h - k) // s + 1, (w - k) // s + 1


def _pool_windows(x, k, s, ho, wo):
    b, c, h, w = x.shape
    sb, sc, sh, sw = x.strides
    shape = (b, c, ho, wo, k, k)
    strides = (sb, sc, sh * s, sw * s, sh, sw)
    return np.lib.stride_tricks.as_strided(x, shape, strides)


def maxpool2d_forward(x, k, s):
    b, c, h, w = x.shape
    ho, wo = _pool_out(h, w, k, s)
    win = _pool_windows(x, k, s, ho, wo).reshape(b, c, ho, wo, k * k)
    # argmax returns the first maximum, which is the lowest flat index
    arg = win.argmax(axis=-1).astype(np.int64)
    out = np.take_along_axis(win, arg[..., None], axis=-1)[..., 0]
    return np.ascontiguousarray(out), arg


def maxpool2d_backward(arg, gy, k, s, h, w):
    b, c, ho, wo = gy.shape
    gx = np.zeros((b, c, h, w), dtype=gy.dtype)
    oy, ox = np.meshgrid(np.arange(ho), np.arange(wo), indexing="ij")
    iy = oy[None, None] * s + arg // k
    ix = ox[None, None] * s + arg % k
    bi = np.arange(b)[:, None, None, None]
    ci = np.arange(c)[None, :, None, None]
    np.add.at(gx, (bi, ci, iy, ix), gy)
    return gx


def avgpool2d_forward(x, k, s):
    b, c, h, w = x.shape
    ho, wo = _pool_out(h, w, k, s)
    win = _pool_windows(x, k, s, ho, wo)
    out = win.sum(axis=(4, 5)) / (k * k)
    return np.ascontiguousarray(out.astype(x.dtype, copy=False))


def avgpool2d_backward(gy, k, s, h, w):
    b, c, ho, wo = gy.shape
    gx = np.zeros((b, c, h, w), dtype=gy.dtype)
    g = gy / (k * k)
    for ki in range(k):
        for kj in range(k):
            gx[:, :, ki : ki + (ho - 1) * s + 1 : s, kj : kj + (wo - 1) * s + 1 : s] += g
    return gx


def _bilinear_axis(coords, size):
    """Clamped neighbour indices and weights for half-pixel sampling."""
    u = coords - 0.5
    i0 = np.floor(u)
    frac = u - i0
    i0 = i0.astype(np.int64)
    i1 = i0 + 1
    # edge clamp: out-of-range neighbours collapse onto the border pixel
    frac = np.where(i0 < 0, 0.0, frac)
    frac = np.where(i1 > size - 1, 1.0, frac)
    i0 = np.clip(i0, 0, size - 1)
    i1 = np.clip(i1, 0, size - 1)
    return i0, i1, frac.astype(coords.dtype)


def resize_bilinear_forward(x, oh, ow):
    b, c, h, w = x.shape
    if oh < 1 or ow < 1:
        raise DimensionError(f"resize: output size {oh}x{ow} must be positive")
    dt = x.dtype
    ys = (np.arange(oh, dtype=dt) + dt.type(0.5)) * dt.type(h / oh)
    xs = (np.arange(ow, dtype=dt) + dt.type(0.5)) * dt.type(w / ow)
    y0, y1, fy = _bilinear_axis(ys, h)
    x0, x1, fx = _bilinear_axis(xs, w)
    fy = fy[:, None]
    fx = fx[None, :]
    top = x[:, :, y0[:, None], x0[None, :]] * (1 - fx) + x[:, :, y0[:, None], x1[None, :]] * fx
    bot = x[:, :, y1[:, None], x0[None, :]] * (1 - fx) + x[:, :, y1[:, None], x1[None, :]] * fx
    return top * (1 - fy) + bot * fy


def resize_bilinear_backward(gy, h, w):
    b, c, oh, ow = gy.shape
    dt = gy.dtype
    ys = (np.arange(oh, dtype=dt) + dt.type(0.5)) * dt.type(h / oh)
    xs = (np.arange(ow, dtype=dt) + dt.type(0.5)) * dt.type(w / ow)
    y0, y1, fy = _bilinear_axis(ys, h)
    x0, x1, fx = _bilinear_axis(xs, w)
    gx = np.zeros((b, c, h, w), dtype=dt)
    bi = np.arange(b)[:, None, None, None]
    ci = np.arange(c)[None, :, None, None]
    fy = fy[:, None]
    fx = fx[None, :]
    for iy, wy in ((y0, 1 - fy), (y1, fy)):
        for ix, wx in ((x0, 1 - fx), (x1, fx)):
            np.add.at(gx, (bi, ci, iy[:, None], ix[None, :]), gy * (wy * wx))
    return gx


def _roi_sample_coords(boxes, oh, ow, n, dtype):
    """Per-box sample coordinates, shape (B, oh*n) x (B, ow*n)."""
    x0, y0, x1, y1 = boxes[:, 0], boxes[:, 1], boxes[:, 2], boxes[:, 3]
    bh = (y1 - y0) / oh
    bw = (x1 - x0) / ow
    step = np.arange(oh * n, dtype=dtype) // n + (np.arange(oh * n) % n + dtype.type(0.5)) / n
    stepw = np.arange(ow * n, dtype=dtype) // n + (np.arange(ow * n) % n + dtype.type(0.5)) / n
    ys = y0[:, None] + bh[:, None] * step[None, :]
    xs = x0[:, None] + bw[:, None] * stepw[None, :]
    return xs, ys


def roi_align_forward(feat, boxes, oh, ow, n):
    b, c, h, w = feat.shape
    if boxes.shape != (b, 4):
        raise DimensionError(f"roi_align: boxes shape {boxes.shape} != ({b}, 4)")
    if np.any(boxes[:, 2] <= boxes[:, 0]) or np.any(boxes[:, 3] <= boxes[:, 1]):
        raise DimensionError("roi_align: degenerate box (zero or negative area)")
    dt = feat.dtype
    xs, ys = _roi_sample_coords(boxes, oh, ow, n, dt)
    bi = np.arange(b)[:, None, None]
    y0, y1, fy = _bilinear_axis(ys, h)
    x0, x1, fx = _bilinear_axis(xs, w)
    fy = fy[:, None, :, None]
    fx = fx[:, None, None, :]
    y0e, y1e = y0[:, None, :, None], y1[:, None, :, None]
    x0e, x1e = x0[:, None, None, :], x1[:, None, None, :]
    bi = np.arange(b)[:, None, None, None]
    ci = np.arange(c)[None, :, None, None]
    # pair the horizontal terms first: mirrored grids then differ only by
    # commutative swaps inside each pair
    top = feat[bi, ci, y0e, x0e] * (1 - fx) + feat[bi, ci, y0e, x1e] * fx
    bot = feat[bi, ci, y1e, x0e] * (1 - fx) + feat[bi, ci, y1e, x1e] * fx
    samples = top * (1 - fy) + bot * fy  # (B, C, oh*n, ow*n)
    binned = samples.reshape(b, c, oh, n, ow, n).sum(axis=5).sum(axis=3)
    return binned / dt.type(n * n)


def roi_align_backward(gy, boxes, h, w, n):
    b, c, oh, ow = gy.shape
    dt = gy.dtype
    xs, ys = _roi_sample_coords(boxes, oh, ow, n, dt)
    y0, y1, fy = _bilinear_axis(ys, h)
    x0, x1, fx = _bilinear_axis(xs, w)
    g = np.repeat(np.repeat(gy, n, axis=2), n, axis=3) / dt.type(n * n)
    gx = np.zeros((b, c, h, w), dtype=dt)
    bi = np.arange(b)[:, None, None, None]
    ci = np.arange(c)[None, :, None, None]
    fy_e = fy[:, None, :, None]
    fx_e = fx[:, None, None, :]
    for iy, wy in ((y0, 1 - fy_e), (y1, fy_e)):
        for ix, wx in ((x0, 1 - fx_e), (x1, fx_e)):
            np.add.at(gx, (bi, ci, iy[:, None, :, None], ix[:, None, None, :]), g * (wy * wx))
    return gx
