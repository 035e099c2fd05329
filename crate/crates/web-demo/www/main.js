import init, { render_emission, template_similarity, evaluate_text } from "./pkg/fontlab_web.js";

const $ = (id) => document.getElementById(id);

function settings() {
  return {
    font: $("font").value,
    standard: $("standard").value,
    scale: Number($("scale").value),
    snr: $("snr").value.trim().toLowerCase() === "inf" ? Infinity : Number($("snr").value),
    bw: Number($("bw").value),
    seed: Number($("seed").value),
    text: $("text").value,
  };
}

function guarded(fn) {
  return () => {
    $("error").textContent = "";
    try {
      fn();
    } catch (e) {
      $("error").textContent = String(e.message ?? e);
    }
  };
}

function drawRender() {
  const s = settings();
  const frame = render_emission(s.font, s.text, s.scale, s.standard, s.snr, s.bw, s.seed);
  const canvas = $("screen");
  canvas.width = frame.width;
  canvas.height = frame.height;
  const img = new ImageData(new Uint8ClampedArray(frame.rgba()), frame.width, frame.height);
  canvas.getContext("2d").putImageData(img, 0, 0);
  canvas.style.width = `${frame.width * 2}px`;
  frame.free();
}

function drawSimilarity() {
  const s = settings();
  const m = JSON.parse(template_similarity(s.font, s.standard, s.bw));
  $("sim-summary").textContent =
    `${m.labels.length} templates; mean pairwise NCC ${m.mean.toFixed(3)}; ` +
    `${(100 * m.fraction_above).toFixed(1)}% of pairs above 0.8`;
  const table = $("heat");
  table.innerHTML = "";
  const head = table.insertRow();
  head.insertCell();
  for (const l of m.labels) head.insertCell().textContent = l;
  m.values.forEach((row, i) => {
    const tr = table.insertRow();
    tr.insertCell().textContent = m.labels[i];
    row.forEach((v, j) => {
      const td = tr.insertCell();
      const shade = Math.round(255 * (1 - Math.max(0, v)));
      td.style.background = v > 0.8 && i !== j ? `rgb(255,${shade},${shade})` : `rgb(${shade},${shade},${shade})`;
      td.title = `${m.labels[i]} / ${m.labels[j]}: ${v.toFixed(3)}`;
    });
  });
}

function drawEvaluation() {
  const s = settings();
  const r = JSON.parse(
    evaluate_text(s.font, s.text, s.scale, s.standard, s.snr, s.bw, s.seed, Number($("threshold").value), $("targets").value),
  );
  $("eval-summary").textContent = `aggregate CER ${r.aggregate_cer} (${r.aggregate_cer_exact}), ${r.hits.length} hits`;
  const table = $("eval-table");
  table.innerHTML = "<tr><th>char</th><th>u</th><th>n</th><th>m</th><th>k</th><th>q</th><th>CER</th></tr>";
  for (const c of r.per_char) {
    const tr = table.insertRow();
    for (const v of [c.char, c.u, c.n, c.m, c.k, c.q, c.cer]) tr.insertCell().textContent = v;
  }
}

await init();
$("go-render").addEventListener("click", guarded(drawRender));
$("go-sim").addEventListener("click", guarded(drawSimilarity));
$("go-eval").addEventListener("click", guarded(drawEvaluation));
guarded(drawRender)();
