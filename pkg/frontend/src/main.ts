// Application state and wiring: owns the current session document,
// routes user intent to the HTTP client, and re-renders after every
// confirmed mutation. All rule checks happen server-side.

import { ApiClient, ApiError, ConnectionLost } from "./api.js";
import { buildViewModel, previewBadge } from "./composer.js";
import type { CreateSessionBody, MoveDoc, SessionDoc } from "./model.js";
import { render } from "./render.js";
import type { Handlers, UiState } from "./render.js";

const api = new ApiClient("");
const root = document.getElementById("app")!;

let session: SessionDoc | null = null;
let selectedHeap: number | null = null;
let composeConsolidate = false;
let previewMove: MoveDoc | null = null;
let previewText: string | null = null;
let previewToken = 0;
let hint: UiState["hint"] = null;
let inlineError: string | null = null;
let offline = false;
let busy = false;
let scrubIndex: number | null = null;

function draw(): void {
  if (!session) {
    drawSetup();
    return;
  }
  const state: UiState = {
    vm: buildViewModel(session),
    selectedHeap,
    composeConsolidate,
    previewMove,
    previewText,
    hint,
    inlineError,
    offline,
    busy,
    scrubIndex,
  };
  render(root, state, handlers);
}

function resetTransient(): void {
  selectedHeap = null;
  composeConsolidate = false;
  previewMove = null;
  previewText = null;
  hint = null;
  inlineError = null;
  scrubIndex = null;
}

function onFailure(err: unknown): void {
  if (err instanceof ConnectionLost) {
    offline = true;
  } else if (err instanceof ApiError) {
    inlineError = err.detail;
  } else {
    inlineError = String(err);
  }
}

async function adopt(doc: SessionDoc): Promise<void> {
  session = doc;
  // creation with the engine to move starts with an explicit engine move;
  // every later engine reply arrives bundled with the human's move
  if (doc.status === "in_progress" && doc.playerToMove === "engine") {
    const result = await api.aiMove(doc.id);
    session = result.session;
  }
}

const handlers: Handlers = {
  selectHeap(index) {
    selectedHeap = selectedHeap === index ? null : index;
    composeConsolidate = false;
    previewMove = null;
    previewText = null;
    inlineError = null;
    draw();
  },

  toggleConsolidate() {
    composeConsolidate = !composeConsolidate;
    previewMove = null;
    previewText = null;
    inlineError = null;
    draw();
  },

  hoverMove(move) {
    previewToken += 1;
    const token = previewToken;
    previewMove = move;
    if (!move || !session) {
      previewText = null;
      draw();
      return;
    }
    api
      .previewMove(session.id, move)
      .then((analysis) => {
        if (token !== previewToken) return;
        previewText = previewBadge(analysis);
        draw();
      })
      .catch(() => {
        // preview is advisory; failures degrade to no badge
        if (token !== previewToken) return;
        previewText = null;
        draw();
      });
    draw();
  },

  async playMove(move) {
    if (!session || busy) return;
    busy = true;
    inlineError = null;
    draw();
    try {
      const result = await api.playMove(session.id, move);
      session = result.session;
      resetTransient();
    } catch (err) {
      onFailure(err);
    }
    busy = false;
    draw();
  },

  tryCustomAmount(heapIndex, amount) {
    const move: MoveDoc =
      heapIndex === null
        ? { type: "consolidate_reduce", amount }
        : { type: "reduce", heapIndex, amount };
    void handlers.playMove(move);
  },

  async requestHint() {
    if (!session || busy) return;
    busy = true;
    draw();
    try {
      hint = await api.hint(session.id);
      if (hint.move && hint.move.type === "reduce") {
        selectedHeap = hint.move.heapIndex!;
        composeConsolidate = false;
      } else if (hint.move) {
        composeConsolidate = true;
      }
    } catch (err) {
      onFailure(err);
    }
    busy = false;
    draw();
  },

  dismissHint() {
    hint = null;
    draw();
  },

  async retry() {
    if (!session) return;
    try {
      await api.health();
      session = await api.getSession(session.id);
      offline = false;
    } catch (err) {
      onFailure(err);
    }
    draw();
  },

  scrub(index) {
    scrubIndex = index;
    draw();
  },

  newGame() {
    session = null;
    resetTransient();
    offline = false;
    draw();
  },
};

function drawSetup(): void {
  root.textContent = "";
  const box = document.createElement("div");
  box.className = "setup";
  box.innerHTML = `
    <h2>multiplicative nim</h2>
    <form class="setup-form">
      <label>game kind
        <select name="variant">
          <option value="numeric" selected>integers mod m</option>
          <option value="poly">finite field F(p^n)</option>
        </select>
      </label>
      <label class="numeric-only">modulus m
        <input name="modulus" type="number" value="5" min="2">
      </label>
      <span class="poly-only" hidden>
        <label>p <input name="p" type="number" value="2" min="2"></label>
        <label>n <input name="n" type="number" value="3" min="1"></label>
        <label>reduction polynomial, base-p digits as an integer
          <input name="fieldModulus" type="number" value="11">
        </label>
      </span>
      <label>heaps (comma separated)
        <input name="heaps" type="text" value="6,6,6">
      </label>
      <label>opponent
        <select name="opponent">
          <option value="engine" selected>engine</option>
          <option value="human">hot seat</option>
        </select>
      </label>
      <label>first player
        <select name="firstPlayer">
          <option value="human" selected>you</option>
          <option value="engine">engine</option>
        </select>
      </label>
      <label>consolidation policy
        <select name="policy">
          <option value="stranded-only" selected>stranded only</option>
          <option value="always">always</option>
        </select>
      </label>
      <button type="submit">start</button>
      <div class="setup-error"></div>
    </form>
  `;
  const form = box.querySelector("form")!;
  const variantPick = form.querySelector<HTMLSelectElement>(
    "select[name=variant]",
  )!;
  const syncVariant = () => {
    const poly = variantPick.value === "poly";
    form.querySelector<HTMLElement>(".numeric-only")!.hidden = poly;
    form.querySelector<HTMLElement>(".poly-only")!.hidden = !poly;
    const heaps = form.querySelector<HTMLInputElement>("input[name=heaps]")!;
    heaps.value = poly ? "3,4" : "6,6,6";
  };
  variantPick.addEventListener("change", syncVariant);
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const data = new FormData(form);
    const heaps = String(data.get("heaps"))
      .split(",")
      .map((part) => Number(part.trim()))
      .filter((v) => !Number.isNaN(v));
    const body: CreateSessionBody = {
      variant: variantPick.value as CreateSessionBody["variant"],
      heaps,
      opponent: String(data.get("opponent")) as "engine" | "human",
      policy: String(data.get("policy")) as "stranded-only" | "always",
      firstPlayer: String(data.get("firstPlayer")) as "human" | "engine",
    };
    if (body.variant === "numeric") {
      body.modulus = Number(data.get("modulus"));
    } else {
      body.field = {
        p: Number(data.get("p")),
        n: Number(data.get("n")),
        modulus: Number(data.get("fieldModulus")),
      };
    }
    const errBox = form.querySelector<HTMLElement>(".setup-error")!;
    errBox.textContent = "";
    api
      .createSession(body)
      .then(adopt)
      .then(draw)
      .catch((err) => {
        if (err instanceof ApiError) errBox.textContent = err.detail;
        else errBox.textContent = "cannot reach the engine";
      });
  });
  root.appendChild(box);
}

draw();
