#!/usr/bin/env node
import { run } from "./render.js";

process.exit(run(process.argv.slice(2)));
