import time, numpy as np, torch
from fvcodec import frames, training, bitstream as bs
from fvcodec.model import VideoCodec, CodecConfig, ReferenceBuffer
from fvcodec.metrics import psnr

t0 = time.time()
train_ds = frames.make_synthetic_dataset(512, 64, "translate", seed=0, clip_len=4)
sched = training.Schedule(batch_size=4, scale_factor=0.001, stage1_lr=2e-4, stage2a_lr=1e-4)  # 1000/200/50/40
cfg = CodecConfig()
model, ckpt = training.train_model(cfg, train_ds, sched, training.RDLossConfig(lam=1024.0),
                                   seed=3, model_id=2, stages=("1", "2a", "2b"), log_every=100)
training.save_checkpoint(ckpt, "/root/pkg/.calib/lam1024_n512.pt")
print("train time", time.time() - t0)

test_ds = frames.make_synthetic_dataset(4, 64, "translate", seed=99, clip_len=4)
model.eval()
gains = []
with torch.no_grad():
    for clip in test_ds.clips:
        x = [bs.frame_to_tensor(f) for f in clip.frames]
        out_i = model.encode_iframe_bytes(x[0])
        xhat = out_i["x_hat"].clamp(0, 1)
        bits_i = 8 * (len(out_i["payloads"][0]) + len(out_i["payloads"][1]))
        print("iframe psnr %.2f bpp %.3f" % (psnr(clip.frames[0], bs.tensor_to_frame(xhat)), bits_i / (64*64)))
        buf = ReferenceBuffer(); buf.push(model.extract(xhat))
        for t in range(1, len(x)):
            out = model.encode_pframe_bytes(x[t], buf.references())
            pred_frame = model.reconstruct(out["f_pred"]).clamp(0, 1)
            p_pred = psnr(clip.frames[t], bs.tensor_to_frame(pred_frame))
            p_copy = psnr(clip.frames[t], clip.frames[t-1])
            p_rec = psnr(clip.frames[t], bs.tensor_to_frame(out["x_hat"].clamp(0,1)))
            bits_o = 8*(len(out["payloads"][0])+len(out["payloads"][1]))
            gains.append((p_pred, p_copy, p_pred - p_copy, p_rec, bits_o))
            buf.push(model.extract(out["x_hat"].clamp(0, 1)))
for g in gains: print("pred %.2f copy %.2f gain %.2f rec %.2f bits_o %d" % g)
print("avg gain", np.mean([g[2] for g in gains]))
print("total time", time.time() - t0)
