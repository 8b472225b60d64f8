import { ApiClient } from "./api.js";
import { GameController } from "./controller.js";
import type { CreateSessionOptions } from "./types.js";

function optionsFromQuery(params: URLSearchParams): CreateSessionOptions {
  const options: CreateSessionOptions = {
    depth: Number(params.get("depth") ?? 3),
    seed: Number(params.get("seed") ?? Math.floor(Math.random() * 2 ** 31)),
  };
  const kind = params.get("predictor");
  if (kind) {
    options.predictor = { kind };
  }
  if (params.get("choose") === "random") {
    options.choose = "random";
  }
  return options;
}

const root = document.getElementById("app");
if (root) {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "";
  const controller = new GameController(root, new ApiClient(base));
  void controller.start(optionsFromQuery(params));
}
