// Copyright 2026 The Hybrid DST Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HDST_DATA_DSTC_IO_H_
#define HDST_DATA_DSTC_IO_H_

#include <string>
#include <vector>

#include "hdst/data/dialog.h"
#include "json.hpp"

namespace hdst {

// Readers and writers for the DSTC2 on-disk layout: one directory per
// session holding log.json and label.json, listed by a newline-separated
// file of paths relative to a data root.
//
// ASR and confusion-network scores are log probabilities on disk and
// probabilities in memory; SLU scores are probabilities in both.

// Non-empty, non-comment lines of a session list.
std::vector<std::string> ReadSessionList(const std::string& path);

// Throws LoadError naming the session for missing or malformed files and
// AlignmentError when log and label turn counts differ.
Corpus LoadCorpus(const std::string& session_list, const std::string& data_root);
LabeledDialog LoadSession(const std::string& data_root, const std::string& session);
Dialog LoadDialogLog(const std::string& log_path);

Dialog ParseDialogLog(const nlohmann::json& log, const std::string& name);
DialogLabels ParseDialogLabels(const nlohmann::json& label, const std::string& name);
std::vector<DialogAct> ParseDialogActs(const nlohmann::json& acts);

nlohmann::ordered_json DialogLogToJson(const Dialog& dialog);
nlohmann::ordered_json DialogLabelsToJson(const DialogLabels& labels);
nlohmann::ordered_json DialogActsToJson(const std::vector<DialogAct>& acts);

// Writes every dialog under data_root/<session_id>/ and the session list.
void WriteCorpus(const Corpus& corpus, const std::string& data_root,
                 const std::string& session_list);

}  // namespace hdst

#endif  // HDST_DATA_DSTC_IO_H_
