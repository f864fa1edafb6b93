// Expects `wasm-pack build --target web --out-dir www/pkg` to have run.
import init, { greedy_cover, random_graph, reduction_image, bounds } from "./pkg/clubcover_web.js";

const $ = (id) => document.getElementById(id);
const palette = ["#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                 "#46f0f0", "#f032e6", "#bcf60c", "#008080", "#9a6324"];

function circleLayout(n, w, h) {
  const r = Math.min(w, h) / 2 - 30;
  return Array.from({ length: n }, (_, i) => {
    const a = (2 * Math.PI * i) / Math.max(n, 1) - Math.PI / 2;
    return [w / 2 + r * Math.cos(a), h / 2 + r * Math.sin(a)];
  });
}

// sets: list of vertex lists (0-based); a vertex in several sets gets a ring per set
function draw(canvas, graph, sets = [], labels = null) {
  const ctx = canvas.getContext("2d");
  const pos = circleLayout(graph.n, canvas.width, canvas.height);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  for (const [u, v] of graph.edges) {
    ctx.beginPath();
    ctx.moveTo(...pos[u]);
    ctx.lineTo(...pos[v]);
    ctx.stroke();
  }
  const member = Array.from({ length: graph.n }, () => []);
  sets.forEach((s, k) => s.forEach((v) => member[v].push(k)));
  ctx.font = "11px sans-serif";
  ctx.textAlign = "center";
  for (let v = 0; v < graph.n; v++) {
    const [x, y] = pos[v];
    member[v].forEach((k, j) => {
      ctx.beginPath();
      ctx.arc(x, y, 8 + 3 * j, 0, 2 * Math.PI);
      ctx.strokeStyle = palette[k % palette.length];
      ctx.lineWidth = 2.5;
      ctx.stroke();
    });
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.arc(x, y, 6, 0, 2 * Math.PI);
    ctx.fillStyle = "#222";
    ctx.fill();
    ctx.fillStyle = "#000";
    ctx.fillText(labels ? labels[v] : String(v + 1), x, y - 14);
  }
}

function report(text) {
  $("out").textContent = text;
}

function guard(f) {
  return () => {
    try {
      f();
    } catch (e) {
      report(String(e));
    }
  };
}

function regenerate() {
  $("text").value = random_graph(+$("n").value, +$("p").value, BigInt($("seed").value));
}

function runGreedy() {
  const v = JSON.parse(greedy_cover($("text").value));
  draw($("left"), v.graph, v.sets);
  $("right").getContext("2d").clearRect(0, 0, 460, 460);
  const b = JSON.parse(bounds(v.graph.n));
  const ratio = v.exact ? (v.sets.length / v.exact).toFixed(3) : "n/a";
  report(
    `greedy: ${v.sets.length} clubs, centers ${v.centers.map((c) => c + 1).join(" ")}, feasible ${v.feasible}\n` +
    `exact optimum: ${v.exact ?? "skipped (graph too large)"}, ratio ${ratio}\n` +
    `guaranteed factor 2 sqrt(n) log2(n)^1.5 = ${b.greedy_factor.toFixed(2)}; ` +
    `greedy vs. best dominating set <= ${b.domination_factor.toFixed(2)}x`
  );
}

function runImage(construction) {
  const v = JSON.parse(reduction_image(construction, $("text").value));
  draw($("left"), v.source);
  draw($("right"), v.image, [], v.labels);
  report(`${construction}: source ${v.source.n} vertices -> image ${v.image.n} vertices, ` +
         `${v.image.edges.length} edges\n\n${v.text}`);
}

await init();
$("gen").onclick = guard(regenerate);
$("greedy").onclick = guard(runGreedy);
$("cp2").onclick = guard(() => runImage("cp-cover2"));
$("cp3").onclick = guard(() => runImage("cp-cover3-pendant"));
regenerate();
guard(runGreedy)();
