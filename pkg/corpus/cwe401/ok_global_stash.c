int *ok_global_stash_slot;
int ok_global_stash() {
    int *p = malloc(4);
    ok_global_stash_slot = p;
    return 0;
}
