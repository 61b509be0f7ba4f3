// Browser shell: mounts the rendered session and wires events. Served
// statically by the annotation server (`cranno serve --ui frontend`).

import { ApiClient } from "./api"
import { SessionController } from "./controller"
import { renderSession } from "./render"

const api = new ApiClient("")

function rerender(root: HTMLElement, controller: SessionController): void {
  root.innerHTML = renderSession(controller.view)
}

async function pickDialogue(): Promise<{ corpus: string; dialogue: string }> {
  const dialogues = await api.listDialogues()
  if (dialogues.length === 0) {
    throw new Error("server has no dialogues")
  }
  return { corpus: dialogues[0].corpus, dialogue: dialogues[0].dialogue }
}

async function boot(): Promise<void> {
  const root = document.getElementById("app")
  if (!root) {
    return
  }
  const params = new URLSearchParams(window.location.search)
  let controller: SessionController
  const existing = params.get("session")
  if (existing) {
    controller = await SessionController.resume(api, existing)
  } else {
    const target = await pickDialogue()
    const annotator = params.get("annotator") ?? "anon"
    controller = await SessionController.start(
      api,
      params.get("corpus") ?? target.corpus,
      params.get("dialogue") ?? target.dialogue,
      annotator,
    )
    params.set("session", controller.sessionId)
    window.history.replaceState(null, "", `?${params.toString()}`)
  }
  rerender(root, controller)

  root.addEventListener("click", async (event) => {
    const target = event.target as HTMLElement
    const answer = target.getAttribute("data-answer")
    if (answer !== null) {
      const tagSelect = root.querySelector<HTMLSelectElement>(
        "select[data-role='gp-tag']",
      )
      const gpTag = tagSelect && tagSelect.value ? tagSelect.value : undefined
      await controller.submit(answer, gpTag)
      rerender(root, controller)
      return
    }
    if (target.getAttribute("data-action") === "export") {
      const text = await controller.exportFile()
      const blob = new Blob([text], { type: "application/x-ndjson" })
      const link = document.createElement("a")
      link.href = URL.createObjectURL(blob)
      link.download = `${controller.view.session.dialogue}.session.jsonl`
      link.click()
      URL.revokeObjectURL(link.href)
    }
  })

  root.addEventListener("submit", async (event) => {
    const form = event.target as HTMLFormElement
    if (form.getAttribute("data-role") !== "undo") {
      return
    }
    event.preventDefault()
    const input = form.querySelector<HTMLInputElement>("input[name='length']")
    if (!input) {
      return
    }
    await controller.truncateTo(Number(input.value))
    params.set("session", controller.sessionId)
    window.history.replaceState(null, "", `?${params.toString()}`)
    rerender(root, controller)
  })
}

boot().catch((error) => {
  const root = document.getElementById("app")
  if (root) {
    root.innerHTML = `<div class="banner">failed to start: ${String(error)}</div>`
  }
})
